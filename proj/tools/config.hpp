#pragma once

#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "magobs/basis.hpp"
#include "magobs/fields.hpp"
#include "magobs/geometry.hpp"

namespace magobs::cli {

using nlohmann::json;

/// Malformed or unsupported configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rejects any key of `obj` outside `allowed`. `where` names the block in
/// the error message.
void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& where);

/// Block `key` of the root, or an empty object when absent.
json block(const json& root, const char* key);

double get_double(const json& obj, const char* key, double fallback);
double require_double(const json& obj, const char* key, const std::string& where);
int get_int(const json& obj, const char* key, int fallback);
bool get_bool(const json& obj, const char* key, bool fallback);
std::string get_string(const json& obj, const char* key, const std::string& fallback);
std::vector<double> get_double_list(const json& obj, const char* key,
                                    const std::vector<double>& fallback);
std::vector<int> get_int_list(const json& obj, const char* key, const std::vector<int>& fallback);

/// {"start": a, "stop": b, "step": s} inclusive of both ends, or an explicit
/// array of values.
std::vector<double> parse_grid(const json& value, const std::string& where);

/// [{k1, k2, re, im}, ...]
FourierField2D parse_field(const json& records, const std::string& where);

struct Fields {
  VectorPotential a;
  FourierField2D v;
};
/// {"A1": [...], "A2": [...], "V": [...]}, each optional (zero by default).
Fields parse_fields(const json& root);

/// {"rects": [[x0, x1, y0, y1], ...]}; absent means the full torus.
Region parse_region(const json& root);

/// {"mean": [k1, k2], "width": [s1, s2]}
ModeVector parse_packet(const json& spec, const ModeBasis& basis, const std::string& where);

}  // namespace magobs::cli
