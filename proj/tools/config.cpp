#include "config.hpp"

#include <algorithm>
#include <cmath>

namespace magobs::cli {

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* a) { return key == a; });
    if (!known) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

json block(const json& root, const char* key) {
  if (!root.contains(key)) return json::object();
  const json& b = root.at(key);
  if (!b.is_object()) throw ConfigError(std::string(key) + ": expected an object");
  return b;
}

namespace {

template <class T>
T typed(const json& v, const std::string& where) {
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + ": wrong value type");
  }
}

}  // namespace

double get_double(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(std::string(key) + ": expected a number");
  return v.get<double>();
}

double require_double(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  return get_double(obj, key, 0.0);
}

int get_int(const json& obj, const char* key, int fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(std::string(key) + ": expected an integer");
  return v.get<int>();
}

bool get_bool(const json& obj, const char* key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_boolean()) throw ConfigError(std::string(key) + ": expected a boolean");
  return v.get<bool>();
}

std::string get_string(const json& obj, const char* key, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(std::string(key) + ": expected a string");
  return v.get<std::string>();
}

std::vector<double> get_double_list(const json& obj, const char* key,
                                    const std::vector<double>& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_array()) throw ConfigError(std::string(key) + ": expected an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ConfigError(std::string(key) + ": expected an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::vector<int> get_int_list(const json& obj, const char* key, const std::vector<int>& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_array()) throw ConfigError(std::string(key) + ": expected an array of integers");
  std::vector<int> out;
  for (const auto& x : v) {
    if (!x.is_number_integer())
      throw ConfigError(std::string(key) + ": expected an array of integers");
    out.push_back(x.get<int>());
  }
  return out;
}

std::vector<double> parse_grid(const json& value, const std::string& where) {
  if (value.is_array()) {
    std::vector<double> out;
    for (const auto& x : value) out.push_back(typed<double>(x, where));
    return out;
  }
  check_keys(value, {"start", "stop", "step"}, where);
  const double a = require_double(value, "start", where);
  const double b = require_double(value, "stop", where);
  const double s = require_double(value, "step", where);
  if (!(s > 0.0) || b < a) throw ConfigError(where + ": need step > 0 and stop >= start");
  const auto n = static_cast<long>(std::floor((b - a) / s + 1e-9));
  if (n > 1000000) throw ConfigError(where + ": grid too large");
  std::vector<double> out;
  for (long i = 0; i <= n; ++i) out.push_back(a + s * static_cast<double>(i));
  return out;
}

FourierField2D parse_field(const json& records, const std::string& where) {
  if (!records.is_array()) throw ConfigError(where + ": expected an array of mode records");
  std::vector<std::pair<Mode, cplx>> modes;
  for (const auto& rec : records) {
    check_keys(rec, {"k1", "k2", "re", "im"}, where);
    if (!rec.contains("k1") || !rec.contains("k2"))
      throw ConfigError(where + ": mode record needs k1 and k2");
    modes.emplace_back(Mode{typed<int>(rec.at("k1"), where), typed<int>(rec.at("k2"), where)},
                       cplx{get_double(rec, "re", 0.0), get_double(rec, "im", 0.0)});
  }
  return FourierField2D::from_modes(modes, true);
}

Fields parse_fields(const json& root) {
  const json f = block(root, "fields");
  check_keys(f, {"A1", "A2", "V"}, "fields");
  Fields out{{FourierField2D(0), FourierField2D(0)}, FourierField2D(0)};
  if (f.contains("A1")) out.a.a1 = parse_field(f.at("A1"), "fields.A1");
  if (f.contains("A2")) out.a.a2 = parse_field(f.at("A2"), "fields.A2");
  if (f.contains("V")) out.v = parse_field(f.at("V"), "fields.V");
  return out;
}

Region parse_region(const json& root) {
  if (!root.contains("region")) return Region::full_torus();
  const json r = block(root, "region");
  check_keys(r, {"rects"}, "region");
  if (!r.contains("rects") || !r.at("rects").is_array())
    throw ConfigError("region: expected \"rects\": [[x0, x1, y0, y1], ...]");
  std::vector<Rect> rects;
  for (const auto& q : r.at("rects")) {
    if (!q.is_array() || q.size() != 4) throw ConfigError("region: each rect is [x0, x1, y0, y1]");
    rects.push_back({typed<double>(q[0], "region"), typed<double>(q[1], "region"),
                     typed<double>(q[2], "region"), typed<double>(q[3], "region")});
  }
  return Region::from_rects(rects);
}

ModeVector parse_packet(const json& spec, const ModeBasis& basis, const std::string& where) {
  check_keys(spec, {"mean", "width"}, where);
  const auto mean = get_double_list(spec, "mean", {0.0, 0.0});
  const auto width = get_double_list(spec, "width", {1.0, 1.0});
  if (mean.size() != 2 || width.size() != 2)
    throw ConfigError(where + ": mean and width take two entries");
  return gaussian_packet(basis, mean[0], mean[1], width[0], width[1]);
}

}  // namespace magobs::cli
