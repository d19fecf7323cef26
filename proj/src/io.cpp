#include "weyllab/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "detail/overloaded.hpp"
#include "weyllab/error.hpp"

namespace weyllab {

using detail::Overloaded;

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

nlohmann::ordered_json space_to_json(const ModelSpace& space) {
  return std::visit(Overloaded{
                        [](const WeightedInterval& s) {
                          return nlohmann::ordered_json{{"kind", "interval"}, {"exponent", s.exponent}};
                        },
                        [](const Circle& s) {
                          return nlohmann::ordered_json{{"kind", "circle"}, {"length", s.length}};
                        },
                        [](const SuspensionTower& s) {
                          return nlohmann::ordered_json{
                              {"kind", "tower"}, {"levels", s.levels}, {"exponent", s.base_exponent}};
                        },
                        [](const Gaussian& s) {
                          return nlohmann::ordered_json{{"kind", "gaussian"}, {"dim", s.dim}};
                        },
                    },
                    space);
}

namespace {

template <class T>
T field(const nlohmann::json& j, const char* name, T fallback) {
  if (!j.contains(name)) return fallback;
  try {
    return j.at(name).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::config, std::string("space field '") + name + "' has the wrong type");
  }
}

}  // namespace

ModelSpace space_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    throw Error(ErrorCode::config, "space descriptor needs a string field 'kind'");
  }
  const auto kind = j.at("kind").get<std::string>();
  ModelSpace space;
  if (kind == "interval") {
    space = WeightedInterval{field<double>(j, "exponent", 0.0)};
  } else if (kind == "circle") {
    space = Circle{field<double>(j, "length", 2.0 * 3.14159265358979323846)};
  } else if (kind == "tower") {
    space = SuspensionTower{field<int>(j, "levels", 2), field<double>(j, "exponent", 0.0)};
  } else if (kind == "gaussian") {
    space = Gaussian{field<int>(j, "dim", 1)};
  } else {
    throw Error(ErrorCode::config, "unknown space kind '" + kind + "'");
  }
  try {
    validate(space);
  } catch (const Error& e) {
    throw Error(ErrorCode::config, e.what());
  }
  return space;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
  out << contents;
  if (!out) throw Error(ErrorCode::io, "write failed for " + path.string());
}

namespace {

void dump_value(std::ostringstream& os, const nlohmann::ordered_json& j, int indent) {
  const std::string pad(indent * 2, ' ');
  const std::string inner((indent + 1) * 2, ' ');
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << inner << nlohmann::json(it.key()).dump() << ": ";
        dump_value(os, it.value(), indent + 1);
      }
      os << '\n' << pad << '}';
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << "[\n";
      bool first = true;
      for (const auto& v : j) {
        if (!first) os << ",\n";
        first = false;
        os << inner;
        dump_value(os, v, indent + 1);
      }
      os << '\n' << pad << ']';
      return;
    }
    case nlohmann::json::value_t::number_float: {
      const double v = j.get<double>();
      // JSON has no inf/nan; emit null for them.
      if (!std::isfinite(v)) {
        os << "null";
      } else {
        std::string s = format_double(v);
        if (s.find_first_of(".eE") == std::string::npos) s += ".0";
        os << s;
      }
      return;
    }
    default:
      os << j.dump();
  }
}

}  // namespace

std::string dump_json(const nlohmann::ordered_json& j) {
  std::ostringstream os;
  dump_value(os, j, 0);
  os << '\n';
  return os.str();
}

}  // namespace weyllab
