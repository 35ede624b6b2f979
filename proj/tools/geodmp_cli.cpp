// Command-line front end: synthesize demo data, learn surface and skill
// models, generate and execute reference trajectories, evaluate results.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "geodmp/io.hpp"

namespace fs = std::filesystem;
using namespace geodmp;

namespace {

Eigen::Vector2d parse_pair(const std::string& s, const std::string& flag) {
  const auto comma = s.find(',');
  if (comma == std::string::npos)
    throw InvalidParamsError(flag + " expects two comma-separated numbers");
  try {
    return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
  } catch (const std::exception&) {
    throw InvalidParamsError(flag + " expects two comma-separated numbers, got '" + s + "'");
  }
}

ScenarioKind parse_kind(const std::string& s) {
  if (s == "plane") return ScenarioKind::plane;
  if (s == "sine") return ScenarioKind::sine_surface;
  if (s == "c_chamfer") return ScenarioKind::c_chamfer;
  throw InvalidParamsError("unknown scenario kind '" + s + "'");
}

TimeWarp parse_warp(const std::string& s) {
  if (s == "none") return TimeWarp::none;
  if (s == "quadratic") return TimeWarp::quadratic;
  if (s == "piecewise") return TimeWarp::piecewise;
  throw InvalidParamsError("unknown time warp '" + s + "'");
}

Config load_config_opt(const std::string& path) {
  return path.empty() ? Config{} : load_config(path);
}

std::string report_csv(const ErrorReport& r) {
  std::ostringstream out;
  out << "metric,value\n";
  out << "pos_rms," << format_double(r.pos_rms) << "\n";
  out << "pos_max," << format_double(r.pos_max) << "\n";
  out << "ori_rms," << format_double(r.ori_rms) << "\n";
  out << "ori_max," << format_double(r.ori_max) << "\n";
  out << "force_rms," << format_double(r.force_rms) << "\n";
  return out.str();
}

int run(int argc, char** argv) {
  CLI::App app{"Motion-primitive learning toolkit for surface grinding skills"};
  app.require_subcommand(1);

  // synth ------------------------------------------------------------------
  auto* synth = app.add_subcommand("synth", "Synthesize demo sweeps over an analytic surface");
  std::string kind_str = "plane";
  std::string out_dir = ".";
  std::string warp_str = "none";
  int demos = 8, points = 200;
  double noise = 0.0;
  std::uint64_t seed = 0;
  std::string truth_from, truth_to;
  int truth_steps = 100;
  synth->add_option("--kind", kind_str, "plane, sine, or c_chamfer");
  synth->add_option("--out", out_dir, "output directory")->required();
  synth->add_option("--demos", demos, "number of demo sweeps");
  synth->add_option("--points", points, "samples per sweep");
  synth->add_option("--noise", noise, "position noise sigma (m)");
  synth->add_option("--warp", warp_str, "none, quadratic, or piecewise");
  synth->add_option("--seed", seed, "RNG seed");
  synth->add_option("--truth-from", truth_from, "world x,y of a truth line start");
  synth->add_option("--truth-to", truth_to, "world x,y of a truth line end");
  synth->add_option("--truth-steps", truth_steps, "truth line interpolation intervals");

  // learn-surface ------------------------------------------------------------
  auto* learn_surface = app.add_subcommand("learn-surface", "Fit a surface model from demos");
  std::vector<std::string> demo_paths;
  std::string out_path, config_path;
  learn_surface->add_option("demos", demo_paths, "demo trajectory files")->required();
  learn_surface->add_option("--out", out_path, "output model file")->required();
  learn_surface->add_option("--config", config_path, "key=value config file");

  // learn-skill --------------------------------------------------------------
  auto* learn_skill = app.add_subcommand("learn-skill", "Encode a skill between two points");
  std::string model_path, start_uv_str, end_uv_str;
  std::string skill_out;
  std::string skill_config;
  int gen_steps = 200;
  learn_skill->add_option("--model", model_path, "surface model file")->required();
  learn_skill->add_option("--start-uv", start_uv_str, "start point u,v")->required();
  learn_skill->add_option("--end-uv", end_uv_str, "end point u,v")->required();
  learn_skill->add_option("--steps", gen_steps, "reference interpolation intervals");
  learn_skill->add_option("--out", skill_out, "output skill file")->required();
  learn_skill->add_option("--config", skill_config, "key=value config file");

  // generate -----------------------------------------------------------------
  auto* generate = app.add_subcommand("generate", "Generate a reference trajectory");
  std::string gen_model, gen_start, gen_end, gen_out;
  int gen_n = 200;
  generate->add_option("--model", gen_model, "surface model file")->required();
  generate->add_option("--start-uv", gen_start, "start point u,v")->required();
  generate->add_option("--end-uv", gen_end, "end point u,v")->required();
  generate->add_option("--steps", gen_n, "interpolation intervals");
  generate->add_option("--out", gen_out, "output trajectory file")->required();

  // execute ------------------------------------------------------------------
  auto* execute = app.add_subcommand("execute", "Integrate an encoded skill");
  std::string exec_skill, exec_out, speed_str = "none";
  int exec_steps = 200;
  execute->add_option("--skill", exec_skill, "skill bundle file")->required();
  execute->add_option("--steps", exec_steps, "output samples");
  execute->add_option("--speed", speed_str, "none, const, or ramp");
  execute->add_option("--out", exec_out, "output trajectory file")->required();

  // evaluate -----------------------------------------------------------------
  auto* eval = app.add_subcommand("evaluate", "Compare two trajectory files");
  std::string eval_gen, eval_truth, eval_out;
  eval->add_option("--generated", eval_gen, "generated trajectory")->required();
  eval->add_option("--truth", eval_truth, "reference trajectory")->required();
  eval->add_option("--out", eval_out, "also write the report table here");

  // config -------------------------------------------------------------------
  auto* config_cmd = app.add_subcommand("config", "Show configuration defaults");
  bool dump = false;
  config_cmd->add_flag("--dump", dump, "print every key with its default");

  CLI11_PARSE(app, argc, argv);

  if (*synth) {
    ScenarioParams params;
    params.n_sweeps = demos;
    params.n_points = points;
    const Scenario sc =
        synth_scenario(parse_kind(kind_str), params, noise, parse_warp(warp_str), seed);
    fs::create_directories(out_dir);
    for (std::size_t i = 0; i < sc.demos.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof(name), "demo_%02zu.csv", i);
      save_trajectory(sc.demos[i], (fs::path(out_dir) / name).string());
    }
    std::cout << "wrote " << sc.demos.size() << " demos to " << out_dir << "\n";
    if (!truth_from.empty() || !truth_to.empty()) {
      if (truth_from.empty() || truth_to.empty())
        throw InvalidParamsError("--truth-from and --truth-to must be given together");
      const SyncTrajectory line =
          truth_line(sc.truth, parse_pair(truth_from, "--truth-from"),
                     parse_pair(truth_to, "--truth-to"), truth_steps);
      save_sync_trajectory(line, (fs::path(out_dir) / "truth_line.csv").string());
      std::cout << "wrote truth_line.csv\n";
    }
    return 0;
  }

  if (*learn_surface) {
    const Config cfg = load_config_opt(config_path);
    std::vector<DemoTrajectory> all;
    for (const auto& p : demo_paths) all.push_back(load_trajectory(p));
    const std::vector<DemoTrajectory> aligned = dtw_align(all);
    std::vector<DemoPoint> points;
    for (const auto& d : aligned) points.insert(points.end(), d.begin(), d.end());
    const ChartParams chart = build_chart(points);
    SurfaceFitOptions opts;
    opts.d_query = cfg.d_query > 0.0 ? cfg.d_query : -1.0;
    opts.k_max = cfg.k_max;
    const SurfaceModel model =
        fit_surface(points, chart, cfg.grid_n, cfg.grid_m, cfg.overlap, opts);
    save_surface_model(model, out_path);
    std::cout << "wrote " << out_path << "\n";
    return 0;
  }

  if (*learn_skill) {
    const Config cfg = load_config_opt(skill_config);
    const SurfaceModel surface = load_surface_model(model_path);
    const SyncTrajectory ref =
        generate_reference(surface, parse_pair(start_uv_str, "--start-uv"),
                           parse_pair(end_uv_str, "--end-uv"), gen_steps);
    EncodeOptions opts;
    opts.n_resample_pos = cfg.n_resample_pos;
    opts.n_fit_ori = cfg.n_fit_ori;
    const SkillBundle bundle = encode_skill(ref, cfg.n_basis_pos, cfg.n_basis_ori,
                                            cfg.n_basis_force, cfg.gains, opts);
    save_skill_bundle(bundle, skill_out);
    std::cout << "wrote " << skill_out << "\n";
    return 0;
  }

  if (*generate) {
    const SurfaceModel surface = load_surface_model(gen_model);
    const SyncTrajectory ref =
        generate_reference(surface, parse_pair(gen_start, "--start-uv"),
                           parse_pair(gen_end, "--end-uv"), gen_n);
    save_sync_trajectory(ref, gen_out);
    std::cout << "wrote " << gen_out << "\n";
    return 0;
  }

  if (*execute) {
    const SkillBundle bundle = load_skill_bundle(exec_skill);
    std::function<double(double)> speed;
    if (speed_str == "const") {
      speed = [](double) { return 1.0; };
    } else if (speed_str == "ramp") {
      speed = [](double l) { return 0.5 + l; };
    } else if (speed_str != "none") {
      throw InvalidParamsError("unknown speed profile '" + speed_str + "'");
    }
    const SyncTrajectory tr = execute_skill(bundle, exec_steps, speed);
    save_sync_trajectory(tr, exec_out);
    std::cout << "wrote " << exec_out << "\n";
    return 0;
  }

  if (*eval) {
    const SyncTrajectory gen = sync_from_demo(load_trajectory(eval_gen));
    const SyncTrajectory truth = sync_from_demo(load_trajectory(eval_truth));
    const ErrorReport r = evaluate(gen, truth);
    const std::string table = report_csv(r);
    std::cout << table;
    if (!eval_out.empty()) {
      std::ofstream out(eval_out);
      if (!out) throw Error("IoError", "cannot write " + eval_out);
      out << table;
    }
    return 0;
  }

  if (*config_cmd) {
    std::cout << dump_config(Config{});
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
