#include "geodmp/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

using json = nlohmann::ordered_json;

namespace geodmp {

namespace {
constexpr int kModelVersion = 1;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// config

namespace {

template <typename T>
bool parse_number(const std::string& s, T& out) {
  std::istringstream ss(s);
  ss >> out;
  return static_cast<bool>(ss) && ss.eof();
}

}  // namespace

void apply_config_line(Config& cfg, const std::string& raw, int line_no) {
  std::string line = raw;
  if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
  const auto first = line.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return;
  const auto last = line.find_last_not_of(" \t\r\n");
  line = line.substr(first, last - first + 1);

  const auto eq = line.find('=');
  if (eq == std::string::npos)
    throw ParseError(line_no, 1, "expected key=value, got '" + line + "'");
  const std::string key = line.substr(0, eq);
  const std::string val = line.substr(eq + 1);

  bool ok = false;
  if (key == "alpha_z") ok = parse_number(val, cfg.gains.alpha_z);
  else if (key == "beta_z") ok = parse_number(val, cfg.gains.beta_z);
  else if (key == "alpha_x") ok = parse_number(val, cfg.gains.alpha_x);
  else if (key == "n_basis_pos") ok = parse_number(val, cfg.n_basis_pos);
  else if (key == "n_basis_ori") ok = parse_number(val, cfg.n_basis_ori);
  else if (key == "n_basis_force") ok = parse_number(val, cfg.n_basis_force);
  else if (key == "grid_n") ok = parse_number(val, cfg.grid_n);
  else if (key == "grid_m") ok = parse_number(val, cfg.grid_m);
  else if (key == "overlap") ok = parse_number(val, cfg.overlap);
  else if (key == "d_query") ok = parse_number(val, cfg.d_query);
  else if (key == "k_max") ok = parse_number(val, cfg.k_max);
  else if (key == "n_fit_ori") ok = parse_number(val, cfg.n_fit_ori);
  else if (key == "n_resample_pos") ok = parse_number(val, cfg.n_resample_pos);
  else if (key == "steps") ok = parse_number(val, cfg.steps);
  else throw ParseError(line_no, 1, "unknown config key '" + key + "'");
  if (!ok) throw ParseError(line_no, static_cast<int>(eq + 2), "bad value '" + val + "'");
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, 0, "cannot open config file " + path);
  Config cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    apply_config_line(cfg, line, line_no);
  }
  return cfg;
}

std::string dump_config(const Config& cfg) {
  std::ostringstream out;
  out << "alpha_z=" << format_double(cfg.gains.alpha_z) << "\n";
  out << "beta_z=" << format_double(cfg.gains.beta_z) << "\n";
  out << "alpha_x=" << format_double(cfg.gains.alpha_x) << "\n";
  out << "n_basis_pos=" << cfg.n_basis_pos << "\n";
  out << "n_basis_ori=" << cfg.n_basis_ori << "\n";
  out << "n_basis_force=" << cfg.n_basis_force << "\n";
  out << "grid_n=" << cfg.grid_n << "\n";
  out << "grid_m=" << cfg.grid_m << "\n";
  out << "overlap=" << format_double(cfg.overlap) << "\n";
  out << "d_query=" << format_double(cfg.d_query) << "\n";
  out << "k_max=" << cfg.k_max << "\n";
  out << "n_fit_ori=" << cfg.n_fit_ori << "\n";
  out << "n_resample_pos=" << cfg.n_resample_pos << "\n";
  out << "steps=" << cfg.steps << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// trajectory files

namespace {

constexpr const char* kTrajHeader = "t,x,y,z,qw,qx,qy,qz,f";

std::vector<double> parse_row(const std::string& line, int line_no, int n_fields) {
  std::vector<double> vals;
  vals.reserve(n_fields);
  std::size_t pos = 0;
  int col = 1;
  while (true) {
    const std::size_t comma = line.find(',', pos);
    const std::string field =
        line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      std::size_t used = 0;
      const double v = std::stod(field, &used);
      if (used != field.size() && field.find_first_not_of(" \r", used) != std::string::npos)
        throw std::invalid_argument(field);
      vals.push_back(v);
    } catch (const std::exception&) {
      throw ParseError(line_no, col, "cannot parse number '" + field + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
    ++col;
  }
  if (static_cast<int>(vals.size()) != n_fields)
    throw ParseError(line_no, static_cast<int>(vals.size()),
                     "expected " + std::to_string(n_fields) + " fields, got " +
                         std::to_string(vals.size()));
  return vals;
}

}  // namespace

DemoTrajectory load_trajectory(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, 0, "cannot open trajectory file " + path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, 1, "missing header line");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTrajHeader)
    throw ParseError(1, 1, "expected header '" + std::string(kTrajHeader) + "'");

  DemoTrajectory traj;
  int line_no = 1;
  int row = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<double> v = parse_row(line, line_no, 9);
    ++row;

    DemoPoint p;
    p.t = v[0];
    p.y = {v[1], v[2], v[3]};
    const double norm = std::sqrt(v[4] * v[4] + v[5] * v[5] + v[6] * v[6] + v[7] * v[7]);
    if (std::abs(norm - 1.0) > 1e-3) throw BadQuaternionNormError(row, norm);
    p.q = UnitQuaternion::from_wxyz(v[4], v[5], v[6], v[7]);
    p.f = v[8];
    if (!traj.empty() && p.t <= traj.back().t)
      throw NonMonotoneTimeError("t does not increase at line " + std::to_string(line_no));
    traj.push_back(p);
  }
  return traj;
}

void save_trajectory(const DemoTrajectory& traj, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("IoError", "cannot write " + path);
  out << kTrajHeader << "\n";
  for (const auto& p : traj) {
    out << format_double(p.t) << ',' << format_double(p.y.x()) << ','
        << format_double(p.y.y()) << ',' << format_double(p.y.z()) << ','
        << format_double(p.q.w) << ',' << format_double(p.q.u.x()) << ','
        << format_double(p.q.u.y()) << ',' << format_double(p.q.u.z()) << ','
        << format_double(p.f) << "\n";
  }
}

void save_sync_trajectory(const SyncTrajectory& tr, const std::string& path) {
  DemoTrajectory demo(tr.size());
  for (int k = 0; k < tr.size(); ++k) {
    demo[k].t = tr.t.empty() ? tr.lambda[k] : tr.t[k];
    demo[k].y = tr.y[k];
    demo[k].q = tr.q[k];
    demo[k].f = tr.f[k];
  }
  save_trajectory(demo, path);
}

// ---------------------------------------------------------------------------
// model files

namespace {

json to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::VectorXd vector_from_json(const json& a) {
  Eigen::VectorXd v(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<int>(i)] = a[i].get<double>();
  return v;
}

Eigen::MatrixXd matrix_from_json(const json& a) {
  const int rows = static_cast<int>(a.size());
  const int cols = rows > 0 ? static_cast<int>(a[0].size()) : 0;
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = a[i][j].get<double>();
  return m;
}

json to_json(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }
json to_json(const Eigen::Vector2d& v) { return json::array({v.x(), v.y()}); }

Eigen::Vector3d vec3_from_json(const json& a) {
  return {a[0].get<double>(), a[1].get<double>(), a[2].get<double>()};
}
Eigen::Vector2d vec2_from_json(const json& a) {
  return {a[0].get<double>(), a[1].get<double>()};
}

json to_json(const UnitQuaternion& q) {
  return json::array({q.w, q.u.x(), q.u.y(), q.u.z()});
}

UnitQuaternion quat_from_json(const json& a) {
  return {a[0].get<double>(),
          Eigen::Vector3d(a[1].get<double>(), a[2].get<double>(), a[3].get<double>())};
}

json to_json(const DmpGains& g) {
  return {{"alpha_z", g.alpha_z}, {"beta_z", g.beta_z}, {"alpha_x", g.alpha_x}};
}

DmpGains gains_from_json(const json& j) {
  DmpGains g;
  g.alpha_z = j.at("alpha_z").get<double>();
  g.beta_z = j.at("beta_z").get<double>();
  g.alpha_x = j.at("alpha_x").get<double>();
  return g;
}

json to_json(const GaussianBasis& b) {
  return {{"centers", to_json(b.centers)}, {"widths", to_json(b.widths)}};
}

GaussianBasis basis_from_json(const json& j) {
  GaussianBasis b;
  b.centers = vector_from_json(j.at("centers"));
  b.widths = vector_from_json(j.at("widths"));
  return b;
}

json to_json(const AlDmpModel& m) {
  return {{"gains", to_json(m.gains)},   {"L", m.L},
          {"y0", to_json(m.y0)},         {"g", to_json(m.g)},
          {"y_d0", to_json(m.y_d0)},     {"scale", to_json(m.scale)},
          {"weights", to_json(m.weights)}, {"basis", to_json(m.basis)}};
}

AlDmpModel al_from_json(const json& j) {
  AlDmpModel m;
  m.gains = gains_from_json(j.at("gains"));
  m.L = j.at("L").get<double>();
  m.y0 = vec3_from_json(j.at("y0"));
  m.g = vec3_from_json(j.at("g"));
  m.y_d0 = vec3_from_json(j.at("y_d0"));
  m.scale = vec3_from_json(j.at("scale"));
  m.weights = matrix_from_json(j.at("weights"));
  m.basis = basis_from_json(j.at("basis"));
  return m;
}

json to_json(const GeoDmpModel& m) {
  return {{"gains", to_json(m.gains)},   {"L", m.L},
          {"q0", to_json(m.q0)},         {"qg", to_json(m.qg)},
          {"eta0", to_json(m.eta0)},     {"scale", to_json(m.scale)},
          {"weights", to_json(m.weights)}, {"basis", to_json(m.basis)}};
}

GeoDmpModel geo_from_json(const json& j) {
  GeoDmpModel m;
  m.gains = gains_from_json(j.at("gains"));
  m.L = j.at("L").get<double>();
  m.q0 = quat_from_json(j.at("q0"));
  m.qg = quat_from_json(j.at("qg"));
  m.eta0 = vec3_from_json(j.at("eta0"));
  m.scale = vec3_from_json(j.at("scale"));
  m.weights = matrix_from_json(j.at("weights"));
  m.basis = basis_from_json(j.at("basis"));
  return m;
}

json to_json(const ForceKernelModel& m) {
  json support = json::array();
  for (bool s : m.support) support.push_back(s);
  return {{"basis", to_json(m.basis)}, {"weights", to_json(m.weights)},
          {"support", std::move(support)}};
}

ForceKernelModel force_from_json(const json& j) {
  ForceKernelModel m;
  m.basis = basis_from_json(j.at("basis"));
  m.weights = vector_from_json(j.at("weights"));
  for (const auto& s : j.at("support")) m.support.push_back(s.get<bool>());
  return m;
}

json load_model_json(const std::string& path, const std::string& expected_kind) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, 0, "cannot open model file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(0, 0, std::string("bad JSON: ") + e.what());
  }
  if (!j.contains("version")) throw ParseError(0, 0, "model file missing version field");
  if (j.at("version").get<int>() != kModelVersion)
    throw ParseError(0, 0, "unsupported model version");
  if (j.at("kind").get<std::string>() != expected_kind)
    throw ParseError(0, 0, "expected a " + expected_kind + " model file");
  return j;
}

void write_json(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("IoError", "cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace

void save_surface_model(const SurfaceModel& model, const std::string& path) {
  json grid = {{"n", model.grid.n},
               {"m", model.grid.m},
               {"centers_u", to_json(model.grid.centers_u)},
               {"centers_v", to_json(model.grid.centers_v)},
               {"sigma", model.grid.sigma},
               {"width", model.grid.width},
               {"weights_z", to_json(model.grid.weights_z)},
               {"weights_f", to_json(model.grid.weights_f)}};
  json support = json::array();
  for (int i = 0; i < model.grid.n; ++i)
    for (int j2 = 0; j2 < model.grid.m; ++j2) support.push_back(bool(model.grid.support(i, j2)));
  grid["support"] = std::move(support);

  json points = json::array();
  for (const auto& p : model.demo_points) {
    points.push_back(json::array(
        {p.t, p.y.x(), p.y.y(), p.y.z(), p.q.w, p.q.u.x(), p.q.u.y(), p.q.u.z(), p.f}));
  }

  json j = {{"version", kModelVersion},
            {"kind", "surface"},
            {"chart",
             {{"x_c", model.chart.x_c},
              {"y_c", model.chart.y_c},
              {"s_x", model.chart.s_x},
              {"s_y", model.chart.s_y}}},
            {"grid", std::move(grid)},
            {"d_query", model.d_query},
            {"k_max", model.k_max},
            {"demo_points", std::move(points)}};
  write_json(j, path);
}

SurfaceModel load_surface_model(const std::string& path) {
  const json j = load_model_json(path, "surface");
  SurfaceModel model;
  const json& c = j.at("chart");
  model.chart = {c.at("x_c").get<double>(), c.at("y_c").get<double>(),
                 c.at("s_x").get<double>(), c.at("s_y").get<double>()};
  const json& g = j.at("grid");
  model.grid.n = g.at("n").get<int>();
  model.grid.m = g.at("m").get<int>();
  model.grid.centers_u = vector_from_json(g.at("centers_u"));
  model.grid.centers_v = vector_from_json(g.at("centers_v"));
  model.grid.sigma = g.at("sigma").get<double>();
  model.grid.width = g.at("width").get<double>();
  model.grid.weights_z = matrix_from_json(g.at("weights_z"));
  model.grid.weights_f = matrix_from_json(g.at("weights_f"));
  model.grid.support.resize(model.grid.n, model.grid.m);
  const json& s = g.at("support");
  int idx = 0;
  for (int i = 0; i < model.grid.n; ++i)
    for (int j2 = 0; j2 < model.grid.m; ++j2) model.grid.support(i, j2) = s[idx++].get<bool>();
  model.d_query = j.at("d_query").get<double>();
  model.k_max = j.at("k_max").get<int>();
  for (const auto& row : j.at("demo_points")) {
    DemoPoint p;
    p.t = row[0].get<double>();
    p.y = {row[1].get<double>(), row[2].get<double>(), row[3].get<double>()};
    p.q = {row[4].get<double>(),
           Eigen::Vector3d(row[5].get<double>(), row[6].get<double>(), row[7].get<double>())};
    p.f = row[8].get<double>();
    model.demo_points.push_back(p);
  }
  return model;
}

void save_skill_bundle(const SkillBundle& bundle, const std::string& path) {
  json j = {{"version", kModelVersion},
            {"kind", "skill"},
            {"al", to_json(bundle.al)},
            {"q_const", to_json(bundle.q_const)},
            {"force", to_json(bundle.force)},
            {"start_uv", to_json(bundle.start_uv)},
            {"end_uv", to_json(bundle.end_uv)}};
  if (bundle.geo) j["geo"] = to_json(*bundle.geo);
  write_json(j, path);
}

SkillBundle load_skill_bundle(const std::string& path) {
  const json j = load_model_json(path, "skill");
  SkillBundle bundle;
  bundle.al = al_from_json(j.at("al"));
  if (j.contains("geo")) bundle.geo = geo_from_json(j.at("geo"));
  bundle.q_const = quat_from_json(j.at("q_const"));
  bundle.force = force_from_json(j.at("force"));
  bundle.start_uv = vec2_from_json(j.at("start_uv"));
  bundle.end_uv = vec2_from_json(j.at("end_uv"));
  return bundle;
}

}  // namespace geodmp
