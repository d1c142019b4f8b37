#include "anls/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>

#include "anls/gibbs.hpp"
#include "anls/io.hpp"
#include "anls/rng.hpp"
#include "anls/strichartz.hpp"

namespace anls {

namespace {

namespace fs = std::filesystem;
using clock_type = std::chrono::steady_clock;

struct RunContext {
  const ExperimentConfig& cfg;
  fs::path out_dir;
  bool has_out = false;
  RunManifest manifest;
  std::string stdout_text;
  clock_type::time_point t0 = clock_type::now();

  explicit RunContext(const ExperimentConfig& c) : cfg(c) {
    manifest.experiment = c.experiment;
    manifest.config = c.to_json();
    manifest.config_sha256 = sha256_hex(c.canonical_text());
    if (!c.output_dir.empty()) {
      out_dir = c.output_dir;
      has_out = true;
      fs::create_directories(out_dir);
    }
  }

  void note_input(const fs::path& p) {
    manifest.inputs.emplace_back(p.string(), sha256_file(p));
  }

  void emit_text(const std::string& rel, const std::string& text) {
    if (!has_out) return;
    write_text_file(out_dir / rel, text);
    manifest.outputs.emplace_back(rel, sha256_hex(text));
  }

  void emit_json(const std::string& rel, const ordered_json& j) { emit_text(rel, j.dump(2) + "\n"); }

  void emit_field(const std::string& rel, const FourierField& f) {
    emit_text(rel, field_to_json(f).dump(2) + "\n");
  }

  void emit_csv(const std::string& rel, const std::vector<std::string>& header,
                const std::vector<std::vector<double>>& rows) {
    std::string text;
    for (size_t i = 0; i < header.size(); ++i) {
      text += header[i];
      text += (i + 1 < header.size()) ? ',' : '\n';
    }
    for (const auto& row : rows) {
      for (size_t i = 0; i < row.size(); ++i) {
        text += format_double(row[i]);
        text += (i + 1 < row.size()) ? ',' : '\n';
      }
    }
    emit_text(rel, text);
  }

  template <typename F>
  auto stage(const std::string& name, F&& fn) {
    auto start = clock_type::now();
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      manifest.stage_timings[name] = std::chrono::duration<double>(clock_type::now() - start).count();
    } else {
      auto out = fn();
      manifest.stage_timings[name] = std::chrono::duration<double>(clock_type::now() - start).count();
      return out;
    }
  }

  RunResult finish(int exit_code) {
    manifest.wall_clock_sec = std::chrono::duration<double>(clock_type::now() - t0).count();
    if (has_out) manifest.write(out_dir);
    return RunResult{exit_code, manifest, stdout_text};
  }
};

Potential load_potential_noted(RunContext& ctx, const std::string& path) {
  ctx.note_input(path);
  ctx.note_input(path + ".meta.json");
  return load_potential(path);
}

std::pair<int, int> parse_block_range(const std::string& text) {
  auto pos = text.find("..");
  if (pos == std::string::npos) {
    int j = std::stoi(text);
    return {j, j};
  }
  return {std::stoi(text.substr(0, pos)), std::stoi(text.substr(pos + 2))};
}

RunResult run_gen_potential(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  PotentialKind kind = potential_kind_from_name(cfg.str("kind"));
  int m = cfg.integer("max_freq");
  Potential v = [&] {
    switch (kind) {
      case PotentialKind::white_noise: return white_noise(m, cfg.seed);
      case PotentialKind::oscillatory: return oscillatory(m, cfg.num("kappa"));
      case PotentialKind::custom: {
        std::string in = cfg.str("in");
        if (in.empty()) throw ParameterError("gen-potential: custom kind needs 'in'");
        ctx.note_input(in);
        return custom_potential(load_field(in), cfg.num("kappa"));
      }
    }
    throw ParameterError("gen-potential: bad kind");
  }();
  ctx.emit_field("potential.json", v.field);
  ordered_json meta;
  meta["kind"] = potential_kind_name(v.kind);
  meta["kappa"] = v.kappa_nominal;
  meta["seed"] = v.seed;
  meta["max_freq"] = v.field.max_freq();
  ctx.emit_json("potential.json.meta.json", meta);
  ctx.stdout_text = "potential kind=" + std::string(potential_kind_name(v.kind)) +
                    " M=" + std::to_string(m) + "\n";
  return ctx.finish(0);
}

RunResult run_spectrum(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  Potential v = load_potential_noted(ctx, cfg.str("potential"));
  int m = cfg.integer("max_freq");
  auto h = ctx.stage("assemble", [&] { return assemble(v, m); });
  auto spec = ctx.stage("diagonalize", [&] { return diagonalize(h); });
  std::vector<std::vector<double>> rows;
  for (int n = 0; n < spec.dim(); ++n)
    rows.push_back({static_cast<double>(n + 1), spec.eigenvalues[n]});
  ctx.emit_csv("eigenvalues.csv", {"n", "lambda"}, rows);
  int limit = cfg.integer("fields_limit");
  int count = limit < 0 ? spec.dim() : std::min(limit, spec.dim());
  ctx.stage("persist_fields", [&] {
    for (int n = 0; n < count; ++n) {
      char name[32];
      std::snprintf(name, sizeof(name), "eigenfield_%04d.json", n + 1);
      ctx.emit_field(name, spec.eigenfield(n));
    }
  });
  ctx.stdout_text = "spectrum M=" + std::to_string(m) +
                    " lambda1=" + format_double(spec.eigenvalues.front()) + "\n";
  return ctx.finish(0);
}

RunResult run_gamma_check(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  Potential v = load_potential_noted(ctx, cfg.str("potential"));
  ReferenceField x = build_reference(v);
  auto map = ctx.stage("build_map", [&] { return build_map(x); });
  int probes = cfg.integer("probes");
  double worst = 0.0, mean = 0.0;
  for (int i = 0; i < probes; ++i) {
    Rng rng = derive_stream(cfg.seed, "gamma-check", i);
    FourierField probe(map.max_freq());
    for (auto& c : probe.coeffs()) c = rng.normal_complex();
    probe *= 1.0 / probe.l2_norm();
    double r = (map.phi(map.gamma(probe)) - probe).l2_norm();
    worst = std::max(worst, r);
    mean += r / probes;
  }
  ordered_json j;
  j["cutoff_N"] = map.cutoff();
  j["contraction"] = map.contraction();
  j["roundtrip_max"] = worst;
  j["roundtrip_mean"] = mean;
  j["probes"] = probes;
  ctx.stdout_text = j.dump(2) + "\n";
  ctx.emit_json("gamma_check.json", j);
  return ctx.finish(0);
}

RunResult run_strichartz(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  Potential v = load_potential_noted(ctx, cfg.str("potential"));
  int m = cfg.integer("max_freq");
  auto h = ctx.stage("assemble", [&] { return assemble(v, m); });
  auto spec = ctx.stage("diagonalize", [&] { return diagonalize(h); });
  ReferenceField x = build_reference(v);
  auto map = ctx.stage("build_map", [&] { return build_map(x); });
  PropagatorPlan plan(spec);
  auto [j_lo, j_hi] = parse_block_range(cfg.str("blocks"));
  std::vector<std::vector<double>> rows;
  ctx.stage("sample", [&] {
    for (int j = j_lo; j <= j_hi; ++j) {
      auto st = strichartz_ratio(map, plan, cfg.num("kappa"), cfg.num("eps"), j,
                                 cfg.integer("samples"), cfg.integer("n_time"), cfg.seed);
      rows.push_back({static_cast<double>(j), st.mean_q, st.max_q, st.stderr_q});
    }
  });
  ctx.emit_csv("strichartz.csv", {"j", "mean_Q", "max_Q", "stderr"}, rows);
  std::string text;
  for (const auto& r : rows)
    text += "j=" + std::to_string(static_cast<int>(r[0])) + " mean_Q=" + format_double(r[1]) +
            " max_Q=" + format_double(r[2]) + " stderr=" + format_double(r[3]) + "\n";
  ctx.stdout_text = text;
  return ctx.finish(0);
}

RunResult run_evolve(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  Potential v = load_potential_noted(ctx, cfg.str("potential"));
  int m = cfg.integer("max_freq");
  ctx.note_input(cfg.str("u0"));
  FourierField u0 = load_field(cfg.str("u0")).band_limited(m);
  auto h = ctx.stage("assemble", [&] { return assemble(v, m); });
  auto spec = ctx.stage("diagonalize", [&] { return diagonalize(h); });

  NlsRun run;
  run.power_m = cfg.integer("m");
  run.lambda = cfg.num("lambda");
  run.n_modes = cfg.integer("modes");
  run.dt = cfg.num("dt");
  run.horizon = cfg.num("T");
  run.allow_aliasing = cfg.boolean("allow_aliasing");
  run.spec = &spec;
  std::string scheme = cfg.str("scheme");

  if (scheme == "picard") {
    ReferenceField x = build_reference(v, m);
    ParacontrolledMap map = build_map(x);
    run.map = &map;
    run.scheme = Scheme::picard;
    auto result = ctx.stage("picard", [&] { return picard_solve(run, u0, run.horizon); });
    std::vector<std::vector<double>> rows;
    for (size_t i = 0; i < result.times.size(); ++i) {
      double mass = result.fields[i].l2_norm();
      rows.push_back({result.times[i], mass * mass});
    }
    ctx.emit_csv("trajectory.csv", {"t", "mass"}, rows);
    ctx.emit_field("final.json", result.fields.back());
    ctx.stdout_text = "picard iterations=" + std::to_string(result.iterations) + "\n";
    return ctx.finish(0);
  }
  if (scheme != "strang") throw ParameterError("evolve: unknown scheme '" + scheme + "'");

  run.scheme = Scheme::strang;
  auto traj = ctx.stage("strang", [&] { return evolve_strang(run, u0, cfg.num("snap_every")); });
  std::vector<std::vector<double>> rows;
  int idx = 0;
  for (const auto& snap : traj.snapshots) {
    rows.push_back({snap.t, state_mass(snap.state), discrete_energy(run, snap.state),
                    discrete_energy_plain_coupling(run, snap.state)});
    char name[32];
    std::snprintf(name, sizeof(name), "snap_%04d.json", idx++);
    ctx.emit_field(name, state_field(run, snap.state));
  }
  ctx.emit_csv("trajectory.csv", {"t", "mass", "energy", "energy_plain"}, rows);
  if (traj.blew_up) {
    ctx.stdout_text =
        "blowup detected; last good time " + format_double(traj.last_good_time) + "\n";
    return ctx.finish(1);
  }
  ctx.stdout_text = "evolved to T=" + format_double(run.horizon) + "\n";
  return ctx.finish(0);
}

RunResult run_threshold(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  double s = sigma_critical(cfg.integer("m"), cfg.num("kappa"));
  ctx.stdout_text = format_double(s) + "\n";
  ctx.emit_text("threshold.txt", ctx.stdout_text);
  return ctx.finish(0);
}

RunResult run_gibbs_sample(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  Potential v = load_potential_noted(ctx, cfg.str("potential"));
  int m_band = cfg.integer("max_freq");
  auto h = ctx.stage("assemble", [&] { return assemble(v, m_band); });
  auto spec = ctx.stage("diagonalize", [&] { return diagonalize(h); });
  int modes = cfg.integer("modes");
  int count = cfg.integer("count");
  double b_in = cfg.num("B");
  double cutoff = b_in < 0.0 ? std::numeric_limits<double>::infinity() : b_in;

  GffSampler sampler(spec, modes);
  std::vector<EigenState> samples(count);
  ctx.stage("sample", [&] {
    for (int i = 0; i < count; ++i) samples[i] = sample_gff_coeffs(sampler, cfg.seed, i);
  });
  auto ens = ctx.stage("weights", [&] {
    return gibbs_weights(spec, std::move(samples), cfg.num("lambda"), cfg.integer("m"), cutoff,
                         spec.eigenvalues.front(), cfg.seed);
  });

  // The ensemble directory is self-contained: potential copy + coefficients
  // + weights; invariance re-diagonalizes deterministically.
  ctx.emit_field("potential.json", v.field);
  ordered_json meta;
  meta["kind"] = potential_kind_name(v.kind);
  meta["kappa"] = v.kappa_nominal;
  meta["seed"] = v.seed;
  meta["max_freq"] = v.field.max_freq();
  ctx.emit_json("potential.json.meta.json", meta);

  ordered_json j;
  j["format"] = "anls.ensemble";
  j["version"] = 1;
  j["max_freq"] = m_band;
  j["modes"] = modes;
  j["count"] = count;
  j["lambda"] = ens.lambda;
  j["m"] = ens.power_m;
  j["B"] = b_in;
  j["lambda1"] = ens.lambda1;
  j["seed"] = cfg.seed;
  j["ess"] = ens.ess;
  j["z_estimate"] = ens.z_estimate;
  j["z_stderr"] = ens.z_stderr;
  j["cutoff_too_tight"] = ens.cutoff_too_tight;
  j["weights"] = ens.weights;
  std::vector<std::vector<double>> coeffs;
  coeffs.reserve(ens.samples.size());
  for (const auto& c : ens.samples) {
    std::vector<double> row;
    row.reserve(2 * c.size());
    for (const auto& z : c) {
      row.push_back(z.real());
      row.push_back(z.imag());
    }
    coeffs.push_back(std::move(row));
  }
  j["samples"] = coeffs;
  ctx.emit_json("ensemble.json", j);
  if (!ens.samples.empty())  // one synthesized sample, handy as initial data
    ctx.emit_field("sample0.json", spec.synthesize(ens.samples.front()));
  ctx.stdout_text = "ensemble count=" + std::to_string(count) + " ESS=" + format_double(ens.ess) +
                    (ens.cutoff_too_tight ? " (cutoff too tight)\n" : "\n");
  return ctx.finish(ens.cutoff_too_tight ? 2 : 0);
}

RunResult run_invariance(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  fs::path dir = cfg.str("ensemble");
  ctx.note_input(dir / "ensemble.json");
  ctx.note_input(dir / "potential.json");
  ctx.note_input(dir / "potential.json.meta.json");
  ordered_json e = ordered_json::parse(read_text_file(dir / "ensemble.json"));
  if (e.value("format", "") != std::string("anls.ensemble"))
    throw ParameterError("invariance: not an ensemble directory");
  Potential v = load_potential(dir / "potential.json");
  int m_band = e.at("max_freq").get<int>();
  auto h = ctx.stage("assemble", [&] { return assemble(v, m_band); });
  auto spec = ctx.stage("diagonalize", [&] { return diagonalize(h); });

  GibbsEnsemble ens;
  ens.lambda = e.at("lambda").get<double>();
  ens.power_m = e.at("m").get<int>();
  double b_in = e.at("B").get<double>();
  ens.mass_cutoff = b_in < 0.0 ? std::numeric_limits<double>::infinity() : b_in;
  ens.lambda1 = e.at("lambda1").get<double>();
  ens.mode_cap = e.at("modes").get<int>();
  ens.seed = e.at("seed").get<uint64_t>();
  ens.ess = e.at("ess").get<double>();
  ens.weights = e.at("weights").get<std::vector<double>>();
  for (const auto& row : e.at("samples")) {
    auto flat = row.get<std::vector<double>>();
    EigenState c(flat.size() / 2);
    for (size_t i = 0; i < c.size(); ++i) c[i] = cplx(flat[2 * i], flat[2 * i + 1]);
    ens.samples.push_back(std::move(c));
  }

  NlsRun run;
  run.power_m = ens.power_m;
  run.lambda = ens.lambda;
  run.n_modes = ens.mode_cap;
  run.dt = cfg.num("dt");
  run.horizon = cfg.num("T");
  run.spec = &spec;

  std::vector<Observable> observables;
  std::string list = cfg.str("observables");
  size_t pos = 0;
  while (pos != std::string::npos) {
    size_t comma = list.find(',', pos);
    std::string name = list.substr(pos, comma == std::string::npos ? comma : comma - pos);
    if (!name.empty()) observables.push_back(observable_from_name(name));
    pos = comma == std::string::npos ? comma : comma + 1;
  }

  auto rep = ctx.stage("experiment", [&] {
    return invariance_experiment(ens, run, observables, cfg.num("T"), cfg.integer("bootstrap"),
                                 cfg.seed, cfg.threads);
  });

  ordered_json out;
  out["pass"] = rep.pass;
  out["blowups"] = rep.blowups;
  out["n_samples"] = rep.n_samples;
  out["ess"] = rep.ess;
  ordered_json obs = ordered_json::array();
  for (const auto& o : rep.observables) {
    ordered_json oj;
    oj["name"] = o.name;
    oj["mean_t0"] = o.mean_t0;
    oj["mean_T"] = o.mean_T;
    oj["delta"] = o.delta;
    oj["sigma_boot"] = o.sigma_boot;
    oj["ci_lo"] = o.ci_lo;
    oj["ci_hi"] = o.ci_hi;
    oj["pass"] = o.pass;
    obs.push_back(oj);
  }
  out["observables"] = obs;
  ctx.emit_json("report.json", out);
  ctx.stdout_text = out.dump(2) + "\n";
  return ctx.finish(rep.pass ? 0 : 2);
}

RunResult run_regularity(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  ctx.note_input(cfg.str("field"));
  FourierField f = load_field(cfg.str("field"));
  BlockProfile profile =
      cfg.str("profile") == "smooth" ? BlockProfile::smooth : BlockProfile::sharp;
  DyadicAnalysis da(f.max_freq(), profile);
  std::vector<std::vector<double>> rows;
  for (int j = -1; j <= da.top_block(); ++j) {
    FourierField blk = lp_block(f, j, da);
    rows.push_back({static_cast<double>(j), linf_grid_norm(blk), blk.l2_norm()});
  }
  ctx.emit_csv("blocks.csv", {"j", "block_linf", "block_l2"}, rows);
  double slope = holder_slope(f, da, cfg.integer("j_min"), cfg.integer("j_max"));
  ordered_json j;
  j["slope"] = slope;
  j["j_min"] = cfg.integer("j_min");
  j["j_max"] = cfg.integer("j_max");
  j["profile"] = cfg.str("profile");
  bool gated = cfg.num("band_lo") != 0.0 || cfg.num("band_hi") != 0.0;
  bool in_band = !gated || (slope >= cfg.num("band_lo") && slope <= cfg.num("band_hi"));
  if (gated) j["in_band"] = in_band;
  ctx.emit_json("regularity.json", j);
  ctx.stdout_text = "slope=" + format_double(slope) + "\n";
  return ctx.finish(in_band ? 0 : 2);
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg) {
  RunContext ctx(cfg);
  const std::string& e = cfg.experiment;
  if (e == "gen-potential") return run_gen_potential(ctx);
  if (e == "spectrum") return run_spectrum(ctx);
  if (e == "gamma-check") return run_gamma_check(ctx);
  if (e == "strichartz") return run_strichartz(ctx);
  if (e == "evolve") return run_evolve(ctx);
  if (e == "threshold") return run_threshold(ctx);
  if (e == "gibbs-sample") return run_gibbs_sample(ctx);
  if (e == "invariance") return run_invariance(ctx);
  if (e == "regularity") return run_regularity(ctx);
  throw ParameterError("unknown experiment: " + e);
}

int reproduce(const std::filesystem::path& manifest_path, std::string* report) {
  RunManifest m = RunManifest::load(manifest_path);
  for (const auto& [path, sha] : m.inputs)
    if (!fs::exists(path)) throw ParameterError("reproduce: missing input " + path);
  std::string diff;
  bool same = true;
  // First pass: the recorded outputs must still match on disk (tamper check).
  if (!verify_outputs(m, manifest_path.parent_path(), &diff)) same = false;
  ExperimentConfig cfg = ExperimentConfig::from_json(m.config);
  fs::path scratch =
      fs::temp_directory_path() / ("anls-reproduce-" + m.config_sha256.substr(0, 12));
  fs::remove_all(scratch);
  cfg.output_dir = scratch.string();
  RunResult rr = run_experiment(cfg);
  std::vector<std::pair<std::string, std::string>> fresh(rr.manifest.outputs.begin(),
                                                         rr.manifest.outputs.end());
  if (fresh.size() != m.outputs.size()) {
    same = false;
    diff += "output count differs\n";
  }
  for (const auto& [rel, sha] : m.outputs) {
    bool found = false;
    for (const auto& [rel2, sha2] : fresh)
      if (rel2 == rel) {
        found = true;
        if (sha2 != sha) {
          same = false;
          diff += "digest mismatch: " + rel + " (" + sha + " -> " + sha2 + ")\n";
        }
        break;
      }
    if (!found) {
      same = false;
      diff += "missing on re-run: " + rel + "\n";
    }
  }
  if (report) *report = diff;
  fs::remove_all(scratch);
  return same ? 0 : 3;
}

}  // namespace anls
