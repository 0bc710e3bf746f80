#include "d2p/config.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <vector>

#include "d2p/errors.hpp"

namespace d2p {
namespace {

struct Value {
  enum class Kind { kString, kNumber, kBool, kNumberArray, kStringArray };
  Kind kind = Kind::kNumber;
  std::string str;
  double num = 0.0;
  bool flag = false;
  std::vector<double> nums;
  std::vector<std::string> strs;
  int line = 0;
};

struct Section {
  std::string name;
  int line = 0;
  std::map<std::string, Value> values;
};

[[noreturn]] void fail(const std::string& origin, int line, const std::string& message) {
  throw ConfigError(origin + ":" + std::to_string(line) + ": " + message);
}

std::string trim(const std::string& s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::string parse_quoted(const std::string& origin, int line, const std::string& raw,
                         std::size_t& pos) {
  std::string out;
  ++pos;  // opening quote
  while (pos < raw.size()) {
    const char c = raw[pos];
    if (c == '\\') {
      if (pos + 1 >= raw.size()) fail(origin, line, "dangling escape in string");
      const char next = raw[pos + 1];
      if (next != '"' && next != '\\') fail(origin, line, "unsupported escape in string");
      out.push_back(next);
      pos += 2;
      continue;
    }
    if (c == '"') {
      ++pos;
      return out;
    }
    out.push_back(c);
    ++pos;
  }
  fail(origin, line, "unterminated string");
}

double parse_number(const std::string& origin, int line, const std::string& token) {
  const std::string t = trim(token);
  if (t.empty()) fail(origin, line, "empty number");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || errno != 0) fail(origin, line, "malformed number '" + t + "'");
  return v;
}

Value parse_value(const std::string& origin, int line, const std::string& raw_in) {
  const std::string raw = trim(raw_in);
  Value value;
  value.line = line;
  if (raw.empty()) fail(origin, line, "missing value");

  if (raw.front() == '"') {
    std::size_t pos = 0;
    value.kind = Value::Kind::kString;
    value.str = parse_quoted(origin, line, raw, pos);
    if (trim(raw.substr(pos)).size() > 0) fail(origin, line, "trailing text after string");
    return value;
  }
  if (raw == "true" || raw == "false") {
    value.kind = Value::Kind::kBool;
    value.flag = raw == "true";
    return value;
  }
  if (raw.front() == '[') {
    if (raw.back() != ']') fail(origin, line, "unterminated array");
    const std::string body = trim(raw.substr(1, raw.size() - 2));
    value.kind = Value::Kind::kNumberArray;
    if (body.empty()) return value;
    std::size_t pos = 0;
    bool expects_string = trim(body).front() == '"';
    value.kind = expects_string ? Value::Kind::kStringArray : Value::Kind::kNumberArray;
    while (pos < body.size()) {
      while (pos < body.size() && std::isspace(static_cast<unsigned char>(body[pos]))) ++pos;
      if (pos >= body.size()) break;
      if (expects_string) {
        if (body[pos] != '"') fail(origin, line, "mixed array element types");
        value.strs.push_back(parse_quoted(origin, line, body, pos));
      } else {
        std::size_t comma = body.find(',', pos);
        const std::string token = body.substr(pos, comma == std::string::npos ? std::string::npos
                                                                              : comma - pos);
        if (token.find('"') != std::string::npos) fail(origin, line, "mixed array element types");
        value.nums.push_back(parse_number(origin, line, token));
        pos = comma == std::string::npos ? body.size() : comma;
      }
      while (pos < body.size() && std::isspace(static_cast<unsigned char>(body[pos]))) ++pos;
      if (pos < body.size()) {
        if (body[pos] != ',') fail(origin, line, "expected ',' in array");
        ++pos;
      }
    }
    return value;
  }
  value.kind = Value::Kind::kNumber;
  value.num = parse_number(origin, line, raw);
  return value;
}

std::vector<Section> parse_sections(const std::string& text, const std::string& origin) {
  std::vector<Section> sections;
  std::istringstream stream(text);
  std::string raw_line;
  int line_no = 0;
  while (std::getline(stream, raw_line)) {
    ++line_no;
    std::string line = raw_line;
    // Strip comments outside of strings.
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) in_string = !in_string;
      if (line[i] == '#' && !in_string) {
        line = line.substr(0, i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      const bool array_table = line.size() > 1 && line[1] == '[';
      const std::string closer = array_table ? "]]" : "]";
      if (line.substr(line.size() - closer.size()) != closer) {
        fail(origin, line_no, "malformed section header");
      }
      const std::size_t start = array_table ? 2 : 1;
      const std::string name =
          trim(line.substr(start, line.size() - start - closer.size()));
      if (name.empty()) fail(origin, line_no, "empty section name");
      if (!array_table) {
        for (const Section& s : sections) {
          if (s.name == name) fail(origin, line_no, "duplicate section [" + name + "]");
        }
      }
      sections.push_back({name, line_no, {}});
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) fail(origin, line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) fail(origin, line_no, "empty key");
    if (sections.empty()) fail(origin, line_no, "key '" + key + "' outside any section");
    if (sections.back().values.count(key) > 0) {
      fail(origin, line_no, "duplicate key '" + key + "'");
    }
    sections.back().values[key] = parse_value(origin, line_no, line.substr(eq + 1));
  }
  return sections;
}

// Typed reader over one section that tracks which keys were consumed.
class SectionReader {
 public:
  SectionReader(const std::string& origin, const Section& section)
      : origin_(origin), section_(section) {}

  double number(const std::string& key, double fallback) {
    const Value* v = take(key);
    if (!v) return fallback;
    if (v->kind != Value::Kind::kNumber) fail(origin_, v->line, "'" + key + "' must be a number");
    return v->num;
  }

  int integer(const std::string& key, int fallback) {
    const Value* v = take(key);
    if (!v) return fallback;
    if (v->kind != Value::Kind::kNumber || v->num != std::floor(v->num)) {
      fail(origin_, v->line, "'" + key + "' must be an integer");
    }
    return static_cast<int>(v->num);
  }

  std::uint64_t unsigned64(const std::string& key, std::uint64_t fallback) {
    const Value* v = take(key);
    if (!v) return fallback;
    if (v->kind != Value::Kind::kNumber || v->num < 0 || v->num != std::floor(v->num)) {
      fail(origin_, v->line, "'" + key + "' must be a nonnegative integer");
    }
    return static_cast<std::uint64_t>(v->num);
  }

  bool boolean(const std::string& key, bool fallback) {
    const Value* v = take(key);
    if (!v) return fallback;
    if (v->kind != Value::Kind::kBool) fail(origin_, v->line, "'" + key + "' must be a boolean");
    return v->flag;
  }

  std::string text(const std::string& key, const std::string& fallback) {
    const Value* v = take(key);
    if (!v) return fallback;
    if (v->kind != Value::Kind::kString) fail(origin_, v->line, "'" + key + "' must be a string");
    return v->str;
  }

  std::vector<std::string> strings(const std::string& key, std::vector<std::string> fallback) {
    const Value* v = take(key);
    if (!v) return fallback;
    if (v->kind != Value::Kind::kStringArray &&
        !(v->kind == Value::Kind::kNumberArray && v->nums.empty())) {
      fail(origin_, v->line, "'" + key + "' must be a string array");
    }
    return v->strs;
  }

  std::vector<double> numbers(const std::string& key, std::size_t count) {
    const Value* v = take(key);
    if (!v) fail(origin_, section_.line, "missing required key '" + key + "'");
    if (v->kind != Value::Kind::kNumberArray || v->nums.size() != count) {
      fail(origin_, v->line,
           "'" + key + "' must be an array of " + std::to_string(count) + " numbers");
    }
    return v->nums;
  }

  void finish() {
    for (const auto& [key, value] : section_.values) {
      if (!used_.count(key)) {
        fail(origin_, value.line, "unknown key '" + key + "' in [" + section_.name + "]");
      }
    }
  }

 private:
  const Value* take(const std::string& key) {
    used_.insert(key);
    const auto it = section_.values.find(key);
    return it == section_.values.end() ? nullptr : &it->second;
  }

  std::string origin_;
  const Section& section_;
  std::set<std::string> used_;
};

}  // namespace

CameraModel PipelineConfig::camera() const {
  return make_overhead_camera(table, camera_settings.x, camera_settings.y,
                              camera_settings.height_above,
                              camera_settings.pitch_deg * std::numbers::pi / 180.0,
                              camera_settings.fx, camera_settings.fy, camera_settings.cx,
                              camera_settings.cy);
}

KinematicChain PipelineConfig::chain() const {
  if (chain_preset == "nicol-like-8dof") return KinematicChain::nicol_like_8dof();
  if (chain_preset == "two-link-planar") return KinematicChain::two_link_planar();
  if (chain_preset == "custom") {
    custom_chain.validate();
    return custom_chain;
  }
  throw ConfigError("unknown chain preset '" + chain_preset + "'");
}

NoiseSchedule PipelineConfig::schedule() const {
  return NoiseSchedule::cosine(schedule_steps, schedule_scale);
}

PipelineConfig default_config() { return PipelineConfig{}; }

PipelineConfig parse_config(const std::string& text, const std::string& origin) {
  PipelineConfig cfg;
  const std::vector<Section> sections = parse_sections(text, origin);

  bool catalog_replaced = false;
  for (const Section& section : sections) {
    SectionReader reader(origin, section);
    if (section.name == "paths") {
      cfg.data_dir = reader.text("data_dir", cfg.data_dir);
      cfg.out_dir = reader.text("out_dir", cfg.out_dir);
    } else if (section.name == "camera") {
      cfg.camera_settings.x = reader.number("x", cfg.camera_settings.x);
      cfg.camera_settings.y = reader.number("y", cfg.camera_settings.y);
      cfg.camera_settings.height_above =
          reader.number("height_above", cfg.camera_settings.height_above);
      cfg.camera_settings.pitch_deg = reader.number("pitch_deg", cfg.camera_settings.pitch_deg);
      cfg.camera_settings.fx = reader.number("fx", cfg.camera_settings.fx);
      cfg.camera_settings.fy = reader.number("fy", cfg.camera_settings.fy);
      cfg.camera_settings.cx = reader.number("cx", cfg.camera_settings.cx);
      cfg.camera_settings.cy = reader.number("cy", cfg.camera_settings.cy);
    } else if (section.name == "table") {
      cfg.table.height_m = reader.number("height", cfg.table.height_m);
      cfg.table.x_min = reader.number("x_min", cfg.table.x_min);
      cfg.table.x_max = reader.number("x_max", cfg.table.x_max);
      cfg.table.y_min = reader.number("y_min", cfg.table.y_min);
      cfg.table.y_max = reader.number("y_max", cfg.table.y_max);
    } else if (section.name == "chain") {
      cfg.chain_preset = reader.text("preset", cfg.chain_preset);
      if (section.values.count("base_translation") > 0) {
        const auto base = reader.numbers("base_translation", 3);
        cfg.custom_chain.base =
            Eigen::Isometry3d(Eigen::Translation3d(base[0], base[1], base[2]));
      }
      if (section.values.count("tool_offset") > 0) {
        const auto tool = reader.numbers("tool_offset", 3);
        cfg.custom_chain.tool_offset = Eigen::Vector3d(tool[0], tool[1], tool[2]);
      }
    } else if (section.name == "chain.joints") {
      const auto axis = reader.numbers("axis", 3);
      const auto offset = reader.numbers("offset", 3);
      const auto limits = reader.numbers("limits", 2);
      Joint joint;
      joint.axis = Eigen::Vector3d(axis[0], axis[1], axis[2]);
      const double norm = joint.axis.norm();
      if (norm < 1e-12) fail(origin, section.line, "joint axis must be nonzero");
      joint.axis /= norm;
      joint.origin_offset = Eigen::Vector3d(offset[0], offset[1], offset[2]);
      joint.limit_lo = limits[0];
      joint.limit_hi = limits[1];
      cfg.custom_chain.joints.push_back(joint);
    } else if (section.name == "catalog") {
      if (!catalog_replaced) {
        cfg.catalog.clear();
        catalog_replaced = true;
      }
      SceneObject obj;
      obj.object_id = reader.text("id", "");
      obj.class_name = reader.text("class", "");
      obj.footprint_radius = reader.number("radius", obj.footprint_radius);
      obj.height = reader.number("height", obj.height);
      obj.graspable = reader.boolean("graspable", obj.graspable);
      if (obj.object_id.empty() || obj.class_name.empty()) {
        fail(origin, section.line, "catalog entries need an id and a class");
      }
      cfg.catalog.push_back(obj);
    } else if (section.name == "vote") {
      cfg.vote.max_window = reader.integer("max_window", cfg.vote.max_window);
      cfg.vote.min_confidence = reader.number("min_confidence", cfg.vote.min_confidence);
      cfg.vote.gate_px = reader.number("gate_px", cfg.vote.gate_px);
      cfg.vote.hand_radius_px = reader.number("hand_radius_px", cfg.vote.hand_radius_px);
      const std::vector<std::string> blacklist = reader.strings(
          "class_blacklist",
          {cfg.vote.class_blacklist.begin(), cfg.vote.class_blacklist.end()});
      cfg.vote.class_blacklist = {blacklist.begin(), blacklist.end()};
    } else if (section.name == "noise") {
      cfg.noise.detect_prob = reader.number("detect_prob", cfg.noise.detect_prob);
      cfg.noise.class_accuracy = reader.number("class_accuracy", cfg.noise.class_accuracy);
      cfg.noise.confusion_bias_class =
          reader.text("confusion_bias_class", cfg.noise.confusion_bias_class);
      cfg.noise.fp_rate_per_frame =
          reader.number("fp_rate_per_frame", cfg.noise.fp_rate_per_frame);
      cfg.noise.arm_fp_prob = reader.number("arm_fp_prob", cfg.noise.arm_fp_prob);
      cfg.noise.held_occlusion_prob =
          reader.number("held_occlusion_prob", cfg.noise.held_occlusion_prob);
      cfg.noise.center_jitter_px = reader.number("center_jitter_px", cfg.noise.center_jitter_px);
    } else if (section.name == "loss") {
      cfg.loss.lambda_ba = reader.number("lambda_ba", cfg.loss.lambda_ba);
      cfg.loss.lambda_ts = reader.number("lambda_ts", cfg.loss.lambda_ts);
      cfg.loss.ts_clip = reader.number("ts_clip", cfg.loss.ts_clip);
      cfg.loss.ba_sigma = reader.number("ba_sigma", cfg.loss.ba_sigma);
    } else if (section.name == "schedule") {
      cfg.schedule_steps = reader.integer("steps", cfg.schedule_steps);
      cfg.schedule_scale = reader.number("scale", cfg.schedule_scale);
    } else if (section.name == "denoiser") {
      cfg.denoiser.layers = reader.integer("layers", cfg.denoiser.layers);
      cfg.denoiser.width = reader.integer("width", cfg.denoiser.width);
      cfg.denoiser.classes = reader.integer("classes", cfg.denoiser.classes);
      cfg.denoiser.feature_dim = reader.integer("feature_dim", cfg.denoiser.feature_dim);
    } else if (section.name == "train") {
      cfg.train.learning_rate = reader.number("learning_rate", cfg.train.learning_rate);
      cfg.train.momentum = reader.number("momentum", cfg.train.momentum);
      cfg.train.epochs = reader.integer("epochs", cfg.train.epochs);
      cfg.train_fraction = reader.number("fraction", cfg.train_fraction);
    } else if (section.name == "ik") {
      cfg.ik.damping = reader.number("damping", cfg.ik.damping);
      cfg.ik.tol_pos = reader.number("tol_pos", cfg.ik.tol_pos);
      cfg.ik.max_iters = reader.integer("max_iters", cfg.ik.max_iters);
      cfg.ik.step_clip = reader.number("step_clip", cfg.ik.step_clip);
      cfg.cart_step = reader.number("cart_step", cfg.cart_step);
      cfg.hover = reader.number("hover", cfg.hover);
    } else if (section.name == "plan") {
      cfg.d_min = reader.number("d_min", cfg.d_min);
      cfg.bounds_tol = reader.number("bounds_tol", cfg.bounds_tol);
    } else if (section.name == "exec") {
      cfg.grasp_radius = reader.number("grasp_radius", cfg.grasp_radius);
      cfg.place_radius = reader.number("place_radius", cfg.place_radius);
    } else if (section.name == "gen") {
      cfg.frame_count = reader.integer("frame_count", cfg.frame_count);
      cfg.fps = reader.number("fps", cfg.fps);
      cfg.per_object = reader.integer("per_object", cfg.per_object);
      cfg.clean_features = reader.boolean("clean_features", cfg.clean_features);
    } else if (section.name == "seeds") {
      cfg.master_seed = reader.unsigned64("master", cfg.master_seed);
    } else {
      fail(origin, section.line, "unknown section [" + section.name + "]");
    }
    reader.finish();
  }

  try {
    cfg.table.validate();
    cfg.camera().validate();
    cfg.chain().validate();
    cfg.vote.validate();
    cfg.noise.validate();
    cfg.loss.validate();
    cfg.denoiser.validate();
    cfg.train.validate();
    cfg.ik.validate();
    if (cfg.schedule_steps < 1) throw DomainError("schedule steps must be >= 1");
    if (cfg.schedule_scale <= 0.0) throw DomainError("schedule scale must be positive");
    if (cfg.train_fraction <= 0.0 || cfg.train_fraction >= 1.0) {
      throw DomainError("train fraction must be in (0, 1)");
    }
    if (cfg.frame_count < 1 || cfg.fps <= 0.0 || cfg.per_object < 1) {
      throw DomainError("generation settings must be positive");
    }
    if (cfg.cart_step <= 0.0 || cfg.hover <= 0.0 || cfg.d_min <= 0.0 || cfg.bounds_tol < 0.0 ||
        cfg.grasp_radius <= 0.0 || cfg.place_radius <= 0.0) {
      throw DomainError("pipeline distances must be positive");
    }
    if (cfg.catalog.empty()) throw DomainError("catalog must not be empty");
    bool any_graspable = false;
    std::set<std::string> catalog_ids;
    for (const SceneObject& obj : cfg.catalog) {
      if (obj.footprint_radius <= 0.0 || obj.height <= 0.0) {
        throw DomainError("catalog entry " + obj.object_id + " needs positive sizes");
      }
      if (!catalog_ids.insert(obj.object_id).second) {
        throw DomainError("duplicate catalog id " + obj.object_id);
      }
      any_graspable = any_graspable || obj.graspable;
    }
    if (!any_graspable) throw DomainError("catalog needs at least one graspable object");
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(origin + ": invalid configuration: " + e.what());
  }
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.string());
}

std::string config_to_toml(const PipelineConfig& c) {
  std::ostringstream out;
  out.precision(17);
  out << "[paths]\n"
      << "data_dir = \"" << c.data_dir << "\"\n"
      << "out_dir = \"" << c.out_dir << "\"\n\n";
  out << "[camera]\n"
      << "x = " << c.camera_settings.x << "\n"
      << "y = " << c.camera_settings.y << "\n"
      << "height_above = " << c.camera_settings.height_above << "\n"
      << "pitch_deg = " << c.camera_settings.pitch_deg << "\n"
      << "fx = " << c.camera_settings.fx << "\n"
      << "fy = " << c.camera_settings.fy << "\n"
      << "cx = " << c.camera_settings.cx << "\n"
      << "cy = " << c.camera_settings.cy << "\n\n";
  out << "[table]\n"
      << "height = " << c.table.height_m << "\n"
      << "x_min = " << c.table.x_min << "\n"
      << "x_max = " << c.table.x_max << "\n"
      << "y_min = " << c.table.y_min << "\n"
      << "y_max = " << c.table.y_max << "\n\n";
  out << "[chain]\n"
      << "preset = \"" << c.chain_preset << "\"\n";
  if (c.chain_preset == "custom") {
    const Eigen::Vector3d base = c.custom_chain.base.translation();
    out << "base_translation = [" << base.x() << ", " << base.y() << ", " << base.z() << "]\n"
        << "tool_offset = [" << c.custom_chain.tool_offset.x() << ", "
        << c.custom_chain.tool_offset.y() << ", " << c.custom_chain.tool_offset.z() << "]\n";
    for (const Joint& joint : c.custom_chain.joints) {
      out << "\n[[chain.joints]]\n"
          << "axis = [" << joint.axis.x() << ", " << joint.axis.y() << ", " << joint.axis.z()
          << "]\n"
          << "offset = [" << joint.origin_offset.x() << ", " << joint.origin_offset.y() << ", "
          << joint.origin_offset.z() << "]\n"
          << "limits = [" << joint.limit_lo << ", " << joint.limit_hi << "]\n";
    }
  }
  out << "\n[vote]\n"
      << "max_window = " << c.vote.max_window << "\n"
      << "min_confidence = " << c.vote.min_confidence << "\n"
      << "gate_px = " << c.vote.gate_px << "\n"
      << "hand_radius_px = " << c.vote.hand_radius_px << "\n"
      << "class_blacklist = [";
  bool first = true;
  for (const std::string& name : c.vote.class_blacklist) {
    out << (first ? "" : ", ") << '"' << name << '"';
    first = false;
  }
  out << "]\n\n";
  for (const SceneObject& obj : c.catalog) {
    out << "[[catalog]]\n"
        << "id = \"" << obj.object_id << "\"\n"
        << "class = \"" << obj.class_name << "\"\n"
        << "radius = " << obj.footprint_radius << "\n"
        << "height = " << obj.height << "\n"
        << "graspable = " << (obj.graspable ? "true" : "false") << "\n\n";
  }
  out << "[noise]\n"
      << "detect_prob = " << c.noise.detect_prob << "\n"
      << "class_accuracy = " << c.noise.class_accuracy << "\n"
      << "confusion_bias_class = \"" << c.noise.confusion_bias_class << "\"\n"
      << "fp_rate_per_frame = " << c.noise.fp_rate_per_frame << "\n"
      << "arm_fp_prob = " << c.noise.arm_fp_prob << "\n"
      << "held_occlusion_prob = " << c.noise.held_occlusion_prob << "\n"
      << "center_jitter_px = " << c.noise.center_jitter_px << "\n\n";
  out << "[loss]\n"
      << "lambda_ba = " << c.loss.lambda_ba << "\n"
      << "lambda_ts = " << c.loss.lambda_ts << "\n"
      << "ts_clip = " << c.loss.ts_clip << "\n"
      << "ba_sigma = " << c.loss.ba_sigma << "\n\n";
  out << "[schedule]\n"
      << "steps = " << c.schedule_steps << "\n"
      << "scale = " << c.schedule_scale << "\n\n";
  out << "[denoiser]\n"
      << "layers = " << c.denoiser.layers << "\n"
      << "width = " << c.denoiser.width << "\n"
      << "classes = " << c.denoiser.classes << "\n"
      << "feature_dim = " << c.denoiser.feature_dim << "\n\n";
  out << "[train]\n"
      << "learning_rate = " << c.train.learning_rate << "\n"
      << "momentum = " << c.train.momentum << "\n"
      << "epochs = " << c.train.epochs << "\n"
      << "fraction = " << c.train_fraction << "\n\n";
  out << "[ik]\n"
      << "damping = " << c.ik.damping << "\n"
      << "tol_pos = " << c.ik.tol_pos << "\n"
      << "max_iters = " << c.ik.max_iters << "\n"
      << "step_clip = " << c.ik.step_clip << "\n"
      << "cart_step = " << c.cart_step << "\n"
      << "hover = " << c.hover << "\n\n";
  out << "[plan]\n"
      << "d_min = " << c.d_min << "\n"
      << "bounds_tol = " << c.bounds_tol << "\n\n";
  out << "[exec]\n"
      << "grasp_radius = " << c.grasp_radius << "\n"
      << "place_radius = " << c.place_radius << "\n\n";
  out << "[gen]\n"
      << "frame_count = " << c.frame_count << "\n"
      << "fps = " << c.fps << "\n"
      << "per_object = " << c.per_object << "\n"
      << "clean_features = " << (c.clean_features ? "true" : "false") << "\n\n";
  out << "[seeds]\n"
      << "master = " << c.master_seed << "\n";
  return out.str();
}

}  // namespace d2p
