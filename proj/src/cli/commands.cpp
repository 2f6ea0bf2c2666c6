#include "frmod/cli/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>

#include "frmod/errors.hpp"
#include "frmod/params.hpp"
#include "frmod/simulate.hpp"
#include "frmod/spectrum.hpp"

namespace frmod::cli {
namespace {

using nlohmann::json;
constexpr double pi = std::numbers::pi;

std::string model_kind(const ModelSpec& m) {
  switch (m.index()) {
    case 0: return "frmod";
    case 1: return "asym";
    default: return "multifactor";
  }
}

json frmod_params(const FrmodSpec& s) {
  const double d = s.mf.d;
  const APair a = params::q_to_a(s.q, d);
  const RPair r = params::a_to_r(a, d);
  const GPair g = params::r_to_g(r, d);
  TimeLimit t = params::r_to_timelimit(r);
  const Interval I = params::admissible_interval(d);
  // Rounding can push a boundary phase a hair outside I_d.
  t.phi = std::clamp(t.phi, I.lo, I.hi);
  SpecLimit sl = params::timelimit_to_speclimit(t, d);
  json doc{{"kind", "frmod"}, {"d", d},         {"lambda0", s.mf.lambda0}, {"q0", s.q.q0}, {"q1", s.q.q1},
           {"a0", a.a0},      {"a1", a.a1},     {"r0", r.r0},              {"r1", r.r1},  {"g0", g.g0},
           {"g1", g.g1},      {"phi", t.phi},   {"I_d", {I.lo, I.hi}},     {"ar", s.ar},  {"ma", s.ma}};
  double gain = 1.0;
  if (s.has_arma()) {
    gain = spectrum::arma_gain(s.ar, s.ma, s.mf.lambda0);
    doc["arma_gain_at_lambda0"] = gain;
  }
  doc["c_gamma"] = t.c_gamma * gain;
  doc["cf_plus"] = sl.cf_plus * gain;
  doc["cf_minus"] = sl.cf_minus * gain;
  return doc;
}

json asym_params(const AsymSpec& s) {
  json doc{{"kind", "asym"},         {"lambda0", s.lambda0},   {"d_plus", s.d_plus},
           {"d_minus", s.d_minus},   {"q1_plus", s.q1_plus},   {"q1_minus", s.q1_minus},
           {"d_star", s.d_star()}};
  doc["cf_plus"] = spectrum::spec_boundary_constants(s.d_plus, s.q1_plus, s.lambda0, 1).cf_divergent;
  doc["cf_minus"] = spectrum::spec_boundary_constants(s.d_minus, s.q1_minus, s.lambda0, -1).cf_divergent;
  doc["plus_component"] = frmod_params(s.plus_component());
  doc["minus_component"] = frmod_params(s.minus_component());
  return doc;
}

std::vector<std::vector<double>> draw_paths(const ModelConfig& cfg) {
  const SimulationConfig& sim = *cfg.simulation;
  std::vector<std::vector<double>> paths;
  paths.reserve(sim.replicates);
  if (sim.method == Method::exact_embedding || sim.method == Method::cholesky) {
    simulate::ExactOptions opt;
    opt.force_cholesky = sim.method == Method::cholesky;
    const simulate::ExactSampler sampler(cfg.model, sim.n, opt);
    for (std::size_t r = 0; r < sim.replicates; ++r) {
      paths.push_back(sampler.sample(simulate::derive_seed(sim.seed, r)).values);
    }
    return paths;
  }
  FrmodSpec spec = std::get<FrmodSpec>(cfg.model);
  const auto ar = spec.ar, ma = spec.ma;
  spec.ar.clear();
  spec.ma.clear();
  const std::size_t burn = ar.empty() ? 0 : std::max<std::size_t>(10 * ar.size(), 100);
  for (std::size_t r = 0; r < sim.replicates; ++r) {
    const auto seed = simulate::derive_seed(sim.seed, r);
    auto s = sim.method == Method::truncated_linear ? simulate::simulate_truncated(spec, sim.n + burn, seed, sim.truncation)
                                                    : simulate::simulate_modulated(spec, sim.n + burn, seed, sim.truncation);
    auto v = std::move(s.values);
    if (!ar.empty() || !ma.empty()) {
      auto f = simulate::apply_arma(v, ar, ma);
      v.assign(f.values.begin() + static_cast<long>(burn), f.values.end());
    }
    paths.push_back(std::move(v));
  }
  return paths;
}

const SimulationConfig& require_simulation(const ModelConfig& cfg, const char* what) {
  if (!cfg.simulation) throw ConfigError(std::string(what) + " needs a 'simulation' block in the config");
  return *cfg.simulation;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path.string() + "'");
  f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json figure_document(int which) {
  json doc;
  switch (which) {
    case 1:
    case 2: {
      const double d = 0.3;
      const TimeLimit t = params::speclimit_to_timelimit({6.2, 25.6}, d);
      QPair q = params::target_phase_to_q(t, d);
      if (which == 2) q.q1 = -q.q1;
      doc = {{"kind", "frmod"}, {"d", d}, {"lambda0", pi / 4}, {"q0", q.q0}, {"q1", q.q1}};
      break;
    }
    case 3:
      doc = {{"kind", "frmod"}, {"d", 0.2}, {"lambda0", pi / 2}, {"q0", 1.0}, {"q1", 1.0}};
      break;
    case 4: {
      const double d = 0.3, q1 = 2.0;
      doc = {{"kind", "frmod"}, {"d", d}, {"lambda0", 2 * pi / 3},
             {"q0", -0.95 * std::tan(pi * d / 2) * q1}, {"q1", q1}};
      break;
    }
    case 5:
    case 6:
      doc = {{"kind", "frmod"}, {"d", 0.4}, {"lambda0", pi / 4}, {"q1", 3.0}, {"boundary_sign", which == 5 ? -1 : 1}};
      break;
    default:
      throw ConfigError("figure must be between 1 and 7");
  }
  doc["hmax"] = 100;
  doc["grid"] = {{"points", 4096}, {"exclusion", 1e-4}};
  return doc;
}

json write_phi_curves(const std::filesystem::path& outdir, std::uint64_t seed) {
  const std::vector<double> ds{0.1, 0.25, 0.35, 0.45};
  const double q0 = 1.0;
  const std::size_t points = 601;
  Table t{{"d", "q0", "q1", "phi", "admissible"}, {}};
  json curves = json::array();
  for (double d : ds) {
    const double bound = q0 / std::tan(pi * d / 2);
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i) grid[i] = -1.5 * bound + 3.0 * bound * double(i) / double(points - 1);
    const auto curve = params::phi_curve(d, q0, grid);
    const Interval I = params::admissible_interval(d);
    bool increasing = true, decreasing = true;
    double prev = std::nan("");
    for (const auto& p : curve) {
      const bool adm = std::abs(p.q1) <= bound * (1 + 1e-12);
      t.rows.push_back({d, q0, p.q1, p.phi, adm ? 1.0 : 0.0});
      if (!adm) continue;
      if (!std::isnan(prev)) {
        increasing = increasing && p.phi > prev;
        decreasing = decreasing && p.phi < prev;
      }
      prev = p.phi;
    }
    curves.push_back({{"d", d}, {"q0", q0}, {"q1_bound", bound}, {"I_d", {I.lo, I.hi}},
                      {"monotone", increasing || decreasing}, {"direction", increasing ? "increasing" : "decreasing"}});
  }
  write_text(outdir / "phi_curves.csv", t.to_csv());
  json manifest{{"figure", 7},
                {"files", {"phi_curves.csv"}},
                {"config", {{"d_values", ds}, {"q0", q0}, {"points", points}, {"q1_range_factor", 1.5}}},
                {"seed", seed},
                {"params", {{"curves", curves}}}};
  write_text(outdir / "manifest.json", dump(manifest));
  return manifest;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == std::rint(v) && std::abs(v) < 1e15) {
    std::ostringstream os;
    os << static_cast<long long>(v);
    return os.str();
  }
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string Table::to_csv() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < headers.size(); ++i) os << (i ? "," : "") << headers[i];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
    os << '\n';
  }
  return os.str();
}

json Table::to_json() const {
  json out = json::array();
  for (const auto& row : rows) {
    json rec;
    for (std::size_t i = 0; i < headers.size(); ++i) rec[headers[i]] = row[i];
    out.push_back(rec);
  }
  return out;
}

json params_document(const ModelSpec& model) {
  validate(model);
  if (const auto* f = std::get_if<FrmodSpec>(&model)) return frmod_params(*f);
  if (const auto* a = std::get_if<AsymSpec>(&model)) return asym_params(*a);
  json comps = json::array();
  for (const auto& c : std::get<MultiFactorSpec>(model).components) {
    if (const auto* f = std::get_if<FrmodSpec>(&c)) {
      comps.push_back(frmod_params(*f));
    } else {
      comps.push_back(asym_params(std::get<AsymSpec>(c)));
    }
  }
  return {{"kind", "multifactor"}, {"components", comps}};
}

Table acvf_table(const ModelConfig& cfg, bool with_sample) {
  const auto gamma = model::acvf(cfg.model, cfg.hmax);
  Table t{{"h", "gamma_true"}, {}};
  std::vector<double> sample(cfg.hmax + 1, 0.0);
  if (with_sample) {
    const auto& sim = require_simulation(cfg, "a sample ACVF");
    if (cfg.hmax >= sim.n) throw ConfigError("hmax must be smaller than simulation.n");
    t.headers.push_back("gamma_sample");
    for (const auto& path : draw_paths(cfg)) {
      const auto g = estimate::sample_acvf(path, cfg.hmax);
      for (std::size_t h = 0; h <= cfg.hmax; ++h) sample[h] += g.values[h] / double(sim.replicates);
    }
  }
  for (std::size_t h = 0; h <= cfg.hmax; ++h) {
    t.rows.push_back({double(h), gamma.values[h]});
    if (with_sample) t.rows.back().push_back(sample[h]);
  }
  return t;
}

Table spectrum_table(const ModelConfig& cfg, bool with_periodogram) {
  if (!with_periodogram) {
    const auto g = spectrum::make_grid(cfg.model, cfg.grid.points, cfg.grid.exclusion);
    Table t{{"lambda", "f_true"}, {}};
    for (std::size_t i = 0; i < g.lambdas.size(); ++i) t.rows.push_back({g.lambdas[i], g.values[i]});
    return t;
  }
  const auto& sim = require_simulation(cfg, "a periodogram");
  const auto sing = spectrum::singular_points(cfg.model);
  std::vector<double> mean;
  std::vector<double> freqs;
  for (const auto& path : draw_paths(cfg)) {
    const auto p = estimate::periodogram(path);
    if (mean.empty()) {
      mean.assign(p.ordinates.size(), 0.0);
      freqs = p.frequencies;
    }
    for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += p.ordinates[j] / double(sim.replicates);
  }
  Table t{{"lambda", "f_true", "periodogram_mean"}, {}};
  for (std::size_t j = 0; j < freqs.size(); ++j) {
    const double l = freqs[j];
    if (std::any_of(sing.begin(), sing.end(), [&](double s) { return std::abs(l - s) <= cfg.grid.exclusion; })) continue;
    t.rows.push_back({l, spectrum::spec(cfg.model, l), mean[j]});
  }
  return t;
}

SimulationRun simulate_series(const ModelConfig& cfg) {
  const auto& sim = require_simulation(cfg, "simulate");
  SimulationRun run;
  run.series.headers = {"n", "x"};
  json meta{{"model_kind", model_kind(cfg.model)},
            {"seed", sim.seed},
            {"n", sim.n},
            {"replicates", sim.replicates},
            {"seed_rule", "replicate r uses derive_seed(seed, r)"}};
  if (sim.method == Method::exact_embedding || sim.method == Method::cholesky) {
    simulate::ExactOptions opt;
    opt.force_cholesky = sim.method == Method::cholesky;
    const simulate::ExactSampler sampler(cfg.model, sim.n, opt);
    const auto s = sampler.sample(simulate::derive_seed(sim.seed, 0));
    for (std::size_t t = 0; t < s.values.size(); ++t) run.series.rows.push_back({double(t), s.values[t]});
    meta["method"] = to_string(s.method);
    meta["requested_method"] = to_string(sim.method);
    meta["cholesky_fallback"] = s.cholesky_fallback;
    meta["embedding_size"] = s.embedding_size;
    meta["clipped_eigenvalue_fraction"] = s.clipped_eigenvalue;
  } else {
    ModelConfig one = cfg;
    one.simulation->replicates = 1;
    const auto paths = draw_paths(one);
    for (std::size_t t = 0; t < paths[0].size(); ++t) run.series.rows.push_back({double(t), paths[0][t]});
    meta["method"] = to_string(sim.method);
    meta["truncation"] = sim.truncation;
    meta["cholesky_fallback"] = false;
    const auto& f = std::get<FrmodSpec>(cfg.model);
    meta["arma_burn_in"] = f.ar.empty() ? 0 : std::max<std::size_t>(10 * f.ar.size(), 100);
  }
  run.metadata = meta;
  return run;
}

ModelConfig figure_config(int which, std::uint64_t seed) {
  json doc = figure_document(which);
  doc["simulation"] = {{"n", 2048}, {"seed", seed}, {"method", "exact"}, {"replicates", 1}};
  return parse_config(doc);
}

json write_figure(int which, const std::filesystem::path& outdir, std::uint64_t seed) {
  std::filesystem::create_directories(outdir);
  if (which == 7) return write_phi_curves(outdir, seed);
  const ModelConfig cfg = figure_config(which, seed);

  const auto run = simulate_series(cfg);
  write_text(outdir / "series.csv", run.series.to_csv());

  std::vector<double> x;
  for (const auto& r : run.series.rows) x.push_back(r[1]);
  const auto gamma = model::acvf(cfg.model, cfg.hmax);
  const auto sample = estimate::sample_acvf(x, cfg.hmax);
  Table acvf{{"h", "gamma_true", "gamma_sample"}, {}};
  for (std::size_t h = 0; h <= cfg.hmax; ++h) acvf.rows.push_back({double(h), gamma.values[h], sample.values[h]});
  write_text(outdir / "acvf.csv", acvf.to_csv());

  write_text(outdir / "spectrum.csv", spectrum_table(cfg, false).to_csv());

  const auto pg = estimate::periodogram(x);
  const auto sing = spectrum::singular_points(cfg.model);
  Table per{{"lambda", "periodogram", "f_true"}, {}};
  for (std::size_t j = 0; j < pg.frequencies.size(); ++j) {
    const double l = pg.frequencies[j];
    if (std::any_of(sing.begin(), sing.end(), [&](double s) { return std::abs(l - s) <= cfg.grid.exclusion; })) continue;
    per.rows.push_back({l, pg.ordinates[j], spectrum::spec(cfg.model, l)});
  }
  write_text(outdir / "periodogram.csv", per.to_csv());

  json manifest{{"figure", which},
                {"files", {"series.csv", "acvf.csv", "spectrum.csv", "periodogram.csv"}},
                {"config", cfg.source},
                {"seed", seed},
                {"params", params_document(cfg.model)},
                {"simulation", run.metadata}};
  write_text(outdir / "manifest.json", dump(manifest));
  return manifest;
}

std::vector<double> read_column(const std::string& csv, const std::string& name) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("input CSV is empty");
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ls(s);
    while (std::getline(ls, cell, ',')) {
      if (!cell.empty() && cell.back() == '\r') cell.pop_back();
      out.push_back(cell);
    }
    return out;
  };
  const auto header = split(line);
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw ConfigError("input CSV has no column '" + name + "'");
  const auto col = static_cast<std::size_t>(it - header.begin());
  std::vector<double> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) throw ConfigError("input CSV line " + std::to_string(lineno) + " has the wrong number of fields");
    try {
      std::size_t used = 0;
      out.push_back(std::stod(cells[col], &used));
      if (used != cells[col].size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw ConfigError("input CSV line " + std::to_string(lineno) + ": '" + cells[col] + "' is not a number");
    }
  }
  return out;
}

DemodulationRun demodulate_series(const std::vector<double>& x, double lambda0, const Companion& companion) {
  const auto d = estimate::rice_demodulate(x, lambda0, companion);
  const auto back = estimate::remodulate(d.y1, d.y2, lambda0);
  DemodulationRun run;
  run.table.headers = {"n", "y1", "y2", "residual"};
  double worst = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    const double res = back[t] - x[t];
    worst = std::max(worst, std::abs(res));
    run.table.rows.push_back({double(t), d.y1[t], d.y2[t], res});
  }
  json probe = json::array();
  const long hmax = std::min<long>(5, static_cast<long>(x.size()) - 1);
  for (long h = 0; h <= hmax; ++h) {
    probe.push_back({{"h", h},
                     {"gamma11", estimate::sample_cross_acvf(d.y1, d.y1, h)},
                     {"gamma22", estimate::sample_cross_acvf(d.y2, d.y2, h)},
                     {"gamma12", estimate::sample_cross_acvf(d.y1, d.y2, h)},
                     {"gamma21", estimate::sample_cross_acvf(d.y2, d.y1, h)}});
  }
  run.metadata = {{"lambda0", lambda0},
                  {"n", x.size()},
                  {"companion", std::holds_alternative<HilbertCompanion>(companion) ? "hilbert" : "independent"},
                  {"max_abs_residual", worst},
                  {"pt_probe", probe}};
  if (const auto* ind = std::get_if<IndependentCompanion>(&companion)) run.metadata["companion_seed"] = ind->seed;
  return run;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fractional random-modulation cyclical long-memory models"};
  app.require_subcommand(1);

  std::string config_path, out_path, format = "csv", input_path, companion_name = "hilbert";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> replicates, hmax, points;
  std::optional<double> lambda0;
  bool with_sample = false, with_periodogram = false;
  int which = 0;

  auto common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("--config", config_path, "JSON model configuration");
    if (needs_config) c->required();
    sub->add_option("--out", out_path, "output file (or directory for figure)");
    sub->add_option("--seed", seed, "override the simulation seed");
    sub->add_option("--replicates", replicates, "override the number of replicates")->check(CLI::PositiveNumber);
    sub->add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json"}));
  };

  auto* params_cmd = app.add_subcommand("params", "limiting parameters of the configured model");
  common(params_cmd, true);
  auto* acvf_cmd = app.add_subcommand("acvf", "theoretical (and optional sample) autocovariances");
  common(acvf_cmd, true);
  acvf_cmd->add_option("--hmax", hmax, "largest lag");
  acvf_cmd->add_flag("--sample", with_sample, "add the replicate-mean sample ACVF");
  auto* spec_cmd = app.add_subcommand("spectrum", "spectral density on a grid");
  common(spec_cmd, true);
  spec_cmd->add_option("--points", points, "grid size")->check(CLI::Range(16, 1 << 24));
  spec_cmd->add_flag("--periodogram", with_periodogram, "add the replicate-mean periodogram");
  auto* sim_cmd = app.add_subcommand("simulate", "one simulated path");
  common(sim_cmd, true);
  auto* fig_cmd = app.add_subcommand("figure", "data bundle for one of the seven figures");
  common(fig_cmd, false);
  fig_cmd->add_option("which", which, "figure number")->required()->check(CLI::Range(1, 7));
  auto* dem_cmd = app.add_subcommand("demodulate", "Rice demodulation of a series");
  common(dem_cmd, false);
  dem_cmd->add_option("--input", input_path, "CSV with a column named x")->required();
  dem_cmd->add_option("--lambda0", lambda0, "cyclical frequency")->required();
  dem_cmd->add_option("--companion", companion_name, "companion series")->check(CLI::IsMember({"hilbert", "independent"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  auto emit = [&](const std::string& text) {
    if (out_path.empty()) {
      out << text;
    } else {
      write_text(out_path, text);
    }
  };
  auto emit_table = [&](const Table& t) { emit(format == "json" ? dump(t.to_json()) : t.to_csv()); };
  auto load = [&]() {
    ModelConfig cfg = load_config(config_path);
    if (cfg.simulation) {
      if (seed) cfg.simulation->seed = *seed;
      if (replicates) cfg.simulation->replicates = *replicates;
    }
    if (hmax) cfg.hmax = *hmax;
    if (points) cfg.grid.points = *points;
    return cfg;
  };

  try {
    if (params_cmd->parsed()) {
      emit(dump(params_document(load().model)));
    } else if (acvf_cmd->parsed()) {
      emit_table(acvf_table(load(), with_sample));
    } else if (spec_cmd->parsed()) {
      emit_table(spectrum_table(load(), with_periodogram));
    } else if (sim_cmd->parsed()) {
      const auto r = simulate_series(load());
      emit_table(r.series);
      if (out_path.empty()) {
        err << r.metadata.dump() << '\n';
      } else {
        write_text(out_path + ".json", dump(r.metadata));
      }
    } else if (fig_cmd->parsed()) {
      const auto manifest = write_figure(which, out_path.empty() ? std::filesystem::path("figure" + std::to_string(which))
                                                                 : std::filesystem::path(out_path),
                                         seed.value_or(2024));
      out << manifest.dump() << '\n';
    } else if (dem_cmd->parsed()) {
      std::ifstream in(input_path);
      if (!in) throw ConfigError("cannot open input '" + input_path + "'");
      std::stringstream buf;
      buf << in.rdbuf();
      const auto x = read_column(buf.str(), "x");
      if (x.size() < 4) throw ConfigError("input series needs at least four values");
      Companion companion = HilbertCompanion{};
      if (companion_name == "independent") {
        if (config_path.empty()) throw ConfigError("--companion independent needs --config for the companion's law");
        companion = IndependentCompanion{load().model, seed.value_or(1)};
      }
      const auto r = demodulate_series(x, *lambda0, companion);
      emit_table(r.table);
      if (out_path.empty()) {
        err << r.metadata.dump() << '\n';
      } else {
        write_text(out_path + ".json", dump(r.metadata));
      }
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    err << "invalid input: " << e.what() << '\n';
    return 2;
  } catch (const NumericFailure& e) {
    err << "numeric failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace frmod::cli
