#include "shiftspread/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace shiftspread {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// ---- key = value text -------------------------------------------------------

class ValueParser {
 public:
  ValueParser(std::string_view text, std::string key) : s_(text), key_(std::move(key)) {}

  json parse_all() {
    json v = value();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing characters '" + std::string(s_.substr(pos_)) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ConfigError(key_, what); }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  json value() {
    skip_ws();
    if (pos_ >= s_.size()) fail("missing value");
    char c = s_[pos_];
    if (c == '{') return table();
    if (c == '[') return array();
    if (c == '"') return string();
    return scalar();
  }

  json table() {
    ++pos_;
    json obj = json::object();
    if (eat('}')) return obj;
    do {
      skip_ws();
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
        ++pos_;
      }
      std::string k(s_.substr(start, pos_ - start));
      if (k.empty()) fail("expected a key inside { }");
      if (!eat('=')) fail("expected '=' after '" + k + "'");
      if (obj.contains(k)) fail("duplicate key '" + k + "'");
      obj[k] = value();
    } while (eat(','));
    if (!eat('}')) fail("expected '}'");
    return obj;
  }

  json array() {
    ++pos_;
    json arr = json::array();
    if (eat(']')) return arr;
    do {
      arr.push_back(value());
    } while (eat(','));
    if (!eat(']')) fail("expected ']'");
    return arr;
  }

  json string() {
    ++pos_;
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != '"') out.push_back(s_[pos_++]);
    if (pos_ >= s_.size()) fail("unterminated string");
    ++pos_;
    return out;
  }

  json scalar() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != ']' && s_[pos_] != '}' &&
           !std::isspace(static_cast<unsigned char>(s_[pos_]))) {
      ++pos_;
    }
    std::string tok(s_.substr(start, pos_ - start));
    if (tok == "true") return true;
    if (tok == "false") return false;
    if (tok == "inf" || tok == "+inf") return "inf";
    double x = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || tok.empty()) {
      fail("cannot parse value '" + tok + "'");
    }
    return x;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::string key_;
};

std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

int bracket_depth(const std::string& s) {
  int depth = 0;
  bool in_string = false;
  for (char c : s) {
    if (c == '"') in_string = !in_string;
    if (in_string) continue;
    if (c == '{' || c == '[') ++depth;
    if (c == '}' || c == ']') --depth;
  }
  return depth;
}

// ---- typed extraction -------------------------------------------------------

double get_number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError(key, "expected a number");
  double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(key, "must be finite");
  return x;
}

double get_positive(const json& v, const std::string& key) {
  double x = get_number(v, key);
  if (!(x > 0.0)) throw ConfigError(key, "must be positive");
  return x;
}

double get_nonnegative(const json& v, const std::string& key) {
  double x = get_number(v, key);
  if (x < 0.0) throw ConfigError(key, "must be nonnegative");
  return x;
}

bool get_bool(const json& v, const std::string& key) {
  if (!v.is_boolean()) throw ConfigError(key, "expected true or false");
  return v.get<bool>();
}

DecayRate get_decay(const json& v, const std::string& key) {
  if (v.is_string() && v.get<std::string>() == "inf") return DecayRate::infinity();
  if (!v.is_number()) throw ConfigError(key, "expected a positive number or inf");
  double x = v.get<double>();
  if (std::isinf(x) && x > 0) return DecayRate::infinity();
  if (!(x > 0.0) || !std::isfinite(x)) throw ConfigError(key, "decay rate must be positive or inf");
  return DecayRate::finite(x);
}

json decay_json(const DecayRate& r) {
  if (r.infinite) return "inf";
  return r.value;
}

void check_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw ConfigError(where.empty() ? it.key() : where + "." + it.key(), "unknown key");
    }
  }
}

KernelSpec get_kernel(const json& v, const std::string& key) {
  if (!v.is_object()) throw ConfigError(key, "expected { family = \"...\", half_width = ... }");
  check_keys(v, key, {"family", "half_width"});
  KernelSpec k;
  if (v.contains("family")) {
    if (!v["family"].is_string()) throw ConfigError(key + ".family", "expected a string");
    try {
      k.family = parse_kernel_family(v["family"].get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(key + ".family", e.what());
    }
  }
  if (v.contains("half_width")) k.half_width = get_positive(v["half_width"], key + ".half_width");
  return k;
}

InitialShape get_initial(const json& v, const std::string& key) {
  if (!v.is_object()) throw ConfigError(key, "expected { amplitude = ..., radius = ... }");
  check_keys(v, key, {"amplitude", "radius"});
  InitialShape s;
  if (v.contains("amplitude")) s.amplitude = get_nonnegative(v["amplitude"], key + ".amplitude");
  if (v.contains("radius")) s.radius = get_nonnegative(v["radius"], key + ".radius");
  return s;
}

const std::set<std::string> kTopKeys = {
    "name",         "d1",          "d2",
    "r1",           "r2",          "a",
    "b",            "alpha_minus", "alpha_plus",
    "c_e",          "kernel1",     "kernel2",
    "lambda1_r",    "lambda1_l",   "lambda2_r",
    "lambda2_l",    "habitat",     "prey_initial",
    "predator_initial", "horizon", "dx",
    "dt",           "pad",         "sample_interval",
    "prey_threshold", "predator_threshold", "snapshots",
    "tolerance_speed", "tolerance_abs", "tolerance_terrace",
    "tolerance_hopf_cole", "checks", "seed"};

const char* kCheckNames[] = {"speeds", "predator", "terrace", "hopf_cole", "certification"};

std::string format_number(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  std::string s = os.str();
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

std::string format_value(const ordered_json& v) {
  if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    return s == "inf" ? "inf" : "\"" + s + "\"";
  }
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_unsigned() || v.is_number_integer()) return v.dump();
  if (v.is_number()) return format_number(v.get<double>());
  if (v.is_array()) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + format_value(v[i]);
    return out + "]";
  }
  std::string out = "{ ";
  bool first = true;
  for (auto it = v.begin(); it != v.end(); ++it) {
    out += (first ? "" : ", ") + it.key() + " = " + format_value(it.value());
    first = false;
  }
  return out + " }";
}

}  // namespace

nlohmann::json parse_key_values(const std::string& text) {
  json obj = json::object();
  std::istringstream in(text);
  std::string line;
  std::string pending;
  int line_no = 0;
  int start_line = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string body = trim(strip_comment(line));
    if (body.empty() && pending.empty()) continue;
    if (pending.empty()) start_line = line_no;
    pending += (pending.empty() ? "" : " ") + body;
    if (bracket_depth(pending) > 0) continue;
    auto eq = pending.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(start_line), "expected 'key = value'");
    }
    std::string key = trim(pending.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(start_line), "missing key");
    if (obj.contains(key)) throw ConfigError(key, "duplicate key");
    obj[key] = ValueParser(pending.substr(eq + 1), key).parse_all();
    pending.clear();
  }
  if (!pending.empty()) {
    throw ConfigError("line " + std::to_string(start_line), "unbalanced brackets");
  }
  return obj;
}

ScenarioConfig from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config", "expected an object at the top level");
  check_keys(j, "", kTopKeys);
  ScenarioConfig c;
  Scenario& sc = c.scenario;
  auto num = [&](const char* key, double& dst, double (*get)(const json&, const std::string&)) {
    if (j.contains(key)) dst = get(j[key], key);
  };
  if (j.contains("name")) {
    if (!j["name"].is_string()) throw ConfigError("name", "expected a string");
    c.name = j["name"].get<std::string>();
  }
  num("d1", sc.d1, get_positive);
  num("d2", sc.d2, get_positive);
  num("r1", sc.r1, get_positive);
  num("r2", sc.r2, get_positive);
  num("a", sc.a, get_nonnegative);
  num("b", sc.b, get_positive);
  num("alpha_minus", sc.alpha_minus, get_positive);
  num("alpha_plus", sc.alpha_plus, get_positive);
  num("c_e", sc.c_e, get_number);
  if (j.contains("kernel1")) sc.kernel1 = get_kernel(j["kernel1"], "kernel1");
  if (j.contains("kernel2")) sc.kernel2 = get_kernel(j["kernel2"], "kernel2");
  sc.lambda1_r = sc.lambda1_l = sc.lambda2_r = sc.lambda2_l = DecayRate::infinity();
  if (j.contains("lambda1_r")) sc.lambda1_r = get_decay(j["lambda1_r"], "lambda1_r");
  if (j.contains("lambda1_l")) sc.lambda1_l = get_decay(j["lambda1_l"], "lambda1_l");
  if (j.contains("lambda2_r")) sc.lambda2_r = get_decay(j["lambda2_r"], "lambda2_r");
  if (j.contains("lambda2_l")) sc.lambda2_l = get_decay(j["lambda2_l"], "lambda2_l");

  if (j.contains("habitat")) {
    const json& h = j["habitat"];
    if (!h.is_object()) throw ConfigError("habitat", "expected { shape = \"...\", width = ... }");
    check_keys(h, "habitat", {"shape", "width"});
    if (h.contains("shape")) {
      if (!h["shape"].is_string()) throw ConfigError("habitat.shape", "expected a string");
      std::string shape = h["shape"].get<std::string>();
      if (shape == "step") {
        c.habitat_shape = HabitatShape::Step;
      } else if (shape == "logistic_ramp") {
        c.habitat_shape = HabitatShape::LogisticRamp;
      } else {
        throw ConfigError("habitat.shape", "expected \"step\" or \"logistic_ramp\"");
      }
    }
    if (h.contains("width")) c.habitat_width = get_nonnegative(h["width"], "habitat.width");
  }
  if (j.contains("prey_initial")) c.prey_initial = get_initial(j["prey_initial"], "prey_initial");
  if (j.contains("predator_initial")) {
    c.predator_initial = get_initial(j["predator_initial"], "predator_initial");
  }
  num("horizon", c.horizon, get_positive);
  num("dx", c.dx, get_nonnegative);
  num("dt", c.dt, get_nonnegative);
  num("pad", c.pad, get_nonnegative);
  num("sample_interval", c.sample_interval, get_positive);
  num("prey_threshold", c.prey_threshold, get_nonnegative);
  num("predator_threshold", c.predator_threshold, get_nonnegative);
  if (j.contains("snapshots")) {
    if (!j["snapshots"].is_array()) throw ConfigError("snapshots", "expected an array of times");
    for (std::size_t i = 0; i < j["snapshots"].size(); ++i) {
      c.snapshots.push_back(
          get_nonnegative(j["snapshots"][i], "snapshots[" + std::to_string(i) + "]"));
    }
  }
  num("tolerance_speed", c.tolerance_speed, get_positive);
  num("tolerance_abs", c.tolerance_abs, get_nonnegative);
  num("tolerance_terrace", c.tolerance_terrace, get_positive);
  num("tolerance_hopf_cole", c.tolerance_hopf_cole, get_positive);
  if (j.contains("checks")) {
    const json& ch = j["checks"];
    if (!ch.is_object()) throw ConfigError("checks", "expected { speeds = true, ... }");
    check_keys(ch, "checks", {std::begin(kCheckNames), std::end(kCheckNames)});
    bool* slots[] = {&c.checks.speeds, &c.checks.predator, &c.checks.terrace, &c.checks.hopf_cole,
                     &c.checks.certification};
    for (int i = 0; i < 5; ++i) {
      std::string k = kCheckNames[i];
      if (ch.contains(k)) *slots[i] = get_bool(ch[k], "checks." + k);
    }
  }
  if (j.contains("seed")) {
    const json& s = j["seed"];
    double x = get_nonnegative(s, "seed");
    if (x != std::floor(x) || x > 9007199254740992.0) throw ConfigError("seed", "expected an integer");
    c.seed = static_cast<std::uint64_t>(x);
  }
  if (c.horizon < c.sample_interval) throw ConfigError("horizon", "shorter than sample_interval");
  return c;
}

ScenarioConfig parse_config(const std::string& text) {
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError("json", e.what());
    }
    return from_json(j);
  }
  return from_json(parse_key_values(text));
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

nlohmann::ordered_json to_json(const ScenarioConfig& c) {
  const Scenario& sc = c.scenario;
  ordered_json j;
  auto kernel = [](const KernelSpec& k) {
    return ordered_json{{"family", to_string(k.family)}, {"half_width", k.half_width}};
  };
  auto initial = [](const InitialShape& s) {
    return ordered_json{{"amplitude", s.amplitude}, {"radius", s.radius}};
  };
  j["name"] = c.name;
  j["d1"] = sc.d1;
  j["d2"] = sc.d2;
  j["r1"] = sc.r1;
  j["r2"] = sc.r2;
  j["a"] = sc.a;
  j["b"] = sc.b;
  j["alpha_minus"] = sc.alpha_minus;
  j["alpha_plus"] = sc.alpha_plus;
  j["c_e"] = sc.c_e;
  j["kernel1"] = kernel(sc.kernel1);
  j["kernel2"] = kernel(sc.kernel2);
  j["lambda1_r"] = decay_json(sc.lambda1_r);
  j["lambda1_l"] = decay_json(sc.lambda1_l);
  j["lambda2_r"] = decay_json(sc.lambda2_r);
  j["lambda2_l"] = decay_json(sc.lambda2_l);
  j["habitat"] = ordered_json{
      {"shape", c.habitat_shape == HabitatShape::Step ? "step" : "logistic_ramp"},
      {"width", c.habitat_width}};
  j["prey_initial"] = initial(c.prey_initial);
  j["predator_initial"] = initial(c.predator_initial);
  j["horizon"] = c.horizon;
  j["dx"] = c.dx;
  j["dt"] = c.dt;
  j["pad"] = c.pad;
  j["sample_interval"] = c.sample_interval;
  j["prey_threshold"] = c.prey_threshold;
  j["predator_threshold"] = c.predator_threshold;
  j["snapshots"] = c.snapshots;
  j["tolerance_speed"] = c.tolerance_speed;
  j["tolerance_abs"] = c.tolerance_abs;
  j["tolerance_terrace"] = c.tolerance_terrace;
  j["tolerance_hopf_cole"] = c.tolerance_hopf_cole;
  j["checks"] = ordered_json{{"speeds", c.checks.speeds},
                             {"predator", c.checks.predator},
                             {"terrace", c.checks.terrace},
                             {"hopf_cole", c.checks.hopf_cole},
                             {"certification", c.checks.certification}};
  j["seed"] = c.seed;
  return j;
}

std::string serialize_config(const ScenarioConfig& c) {
  ordered_json j = to_json(c);
  std::string out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    out += it.key() + " = " + format_value(it.value()) + "\n";
  }
  return out;
}

HabitatProfile ScenarioConfig::habitat() const {
  HabitatProfile h;
  h.shape = habitat_shape;
  h.width = habitat_width > 0.0
                ? habitat_width
                : 5.0 * std::max(scenario.kernel1.half_width, scenario.kernel2.half_width);
  h.alpha_minus = scenario.alpha_minus;
  h.alpha_plus = scenario.alpha_plus;
  return h;
}

InitialData ScenarioConfig::prey_data() const {
  InitialData d;
  d.amplitude = prey_initial.amplitude > 0.0 ? prey_initial.amplitude : scenario.alpha_minus;
  d.radius = prey_initial.radius;
  d.right = scenario.lambda1_r;
  d.left = scenario.lambda1_l;
  return d;
}

InitialData ScenarioConfig::predator_data() const {
  InitialData d;
  d.amplitude = predator_initial.amplitude > 0.0 ? predator_initial.amplitude
                                                 : std::max(scenario.v_minus(), 0.0);
  d.radius = predator_initial.radius;
  d.right = scenario.lambda2_r;
  d.left = scenario.lambda2_l;
  return d;
}

double ScenarioConfig::resolved_dx() const {
  if (dx > 0.0) return dx;
  return std::min(scenario.kernel1.half_width, scenario.kernel2.half_width) / 8.0;
}

double ScenarioConfig::resolved_prey_threshold() const {
  return prey_threshold > 0.0 ? prey_threshold : 0.01 * scenario.alpha_plus;
}

double ScenarioConfig::resolved_predator_threshold() const {
  if (predator_threshold > 0.0) return predator_threshold;
  double v = scenario.v_plus() > 0.0 ? scenario.v_plus() : scenario.v_minus();
  return 0.01 * std::max(v, 1e-12);
}

}  // namespace shiftspread
