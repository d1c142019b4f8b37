// anls: numerical laboratory for the 1-D periodic Schroedinger operator with
// distributional potential - potentials, spectra, paracontrolled conjugation,
// dispersive ratios, truncated NLS dynamics and Gibbs-measure experiments.
//
// Every subcommand builds one ExperimentConfig (a --config file provides
// defaults, explicit flags override) and dispatches through the runner, which
// writes outputs plus a manifest.json into --out.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "anls/io.hpp"
#include "anls/runner.hpp"

namespace {

struct CommonFlags {
  std::string config_file;
  std::string out_dir;
  uint64_t seed = 0;
  int threads = 1;
};

void add_common(CLI::App* cmd, CommonFlags& common) {
  cmd->add_option("--config", common.config_file, "JSON config file (flags override it)");
  cmd->add_option("--out", common.out_dir, "output directory (manifest + artifacts)");
  cmd->add_option("--seed", common.seed, "master seed");
  cmd->add_option("--threads", common.threads, "worker threads for independent items")
      ->envname("ANLS_THREADS");
}

anls::ExperimentConfig make_config(const std::string& experiment, const CLI::App* cmd,
                                   const CommonFlags& common,
                                   const anls::ordered_json& cli_params) {
  anls::ordered_json j;
  if (!common.config_file.empty()) {
    j = anls::ordered_json::parse(anls::read_text_file(common.config_file));
    if (j.value("experiment", experiment) != experiment)
      throw anls::ParameterError("config file is for experiment '" +
                                 j.value("experiment", std::string{}) + "'");
  }
  j["experiment"] = experiment;
  if (cmd->count("--seed") || !j.contains("seed")) j["seed"] = common.seed;
  if (cmd->count("--threads") || !j.contains("threads")) j["threads"] = common.threads;
  if (cmd->count("--out") || !j.contains("output_dir")) j["output_dir"] = common.out_dir;
  if (!j.contains("params")) j["params"] = anls::ordered_json::object();
  for (const auto& [key, value] : cli_params.items()) j["params"][key] = value;
  return anls::ExperimentConfig::from_json(j);
}

int dispatch(const anls::ExperimentConfig& cfg) {
  anls::RunResult rr = anls::run_experiment(cfg);
  std::fputs(rr.stdout_text.c_str(), stdout);
  return rr.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"anls - spectral laboratory for rough-potential Schroedinger dynamics"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default(true);

  // gen-potential
  CommonFlags c_gen;
  std::string gen_kind = "white", gen_in;
  int gen_m = 256;
  double gen_kappa = 0.49;
  auto* gen = app.add_subcommand("gen-potential", "generate a distributional potential");
  add_common(gen, c_gen);
  gen->add_option("--kind", gen_kind, "white | osc | custom");
  gen->add_option("--max-freq", gen_m, "frequency band M");
  gen->add_option("--kappa", gen_kappa, "advertised regularity gap");
  gen->add_option("--in", gen_in, "input field record (custom kind)");

  // spectrum
  CommonFlags c_spec;
  std::string spec_pot;
  int spec_m = 64, spec_limit = -1;
  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues and eigenfields of H");
  add_common(spectrum, c_spec);
  spectrum->add_option("--potential", spec_pot, "potential field record");
  spectrum->add_option("--max-freq", spec_m, "Galerkin band M");
  spectrum->add_option("--fields-limit", spec_limit, "persist only the first n eigenfields");

  // gamma-check
  CommonFlags c_gc;
  std::string gc_pot;
  int gc_probes = 20;
  auto* gc = app.add_subcommand("gamma-check", "paracontrolled map diagnostics");
  add_common(gc, c_gc);
  gc->add_option("--potential", gc_pot, "potential field record");
  gc->add_option("--probes", gc_probes, "round-trip probe count");

  // strichartz
  CommonFlags c_str;
  std::string str_pot, str_blocks = "2..6";
  int str_m = 128, str_samples = 50, str_ntime = 256;
  double str_kappa = 0.49, str_eps = 0.05;
  auto* stri = app.add_subcommand("strichartz", "dispersive ratio estimates per block");
  add_common(stri, c_str);
  stri->add_option("--potential", str_pot, "potential field record");
  stri->add_option("--max-freq", str_m, "Galerkin band M");
  stri->add_option("--kappa", str_kappa, "regularity gap");
  stri->add_option("--eps", str_eps, "regularity margin in the data norm");
  stri->add_option("--blocks", str_blocks, "block range, e.g. 2..6");
  stri->add_option("--samples", str_samples, "samples per block");
  stri->add_option("--n-time", str_ntime, "time quadrature nodes (>= 64)");

  // evolve
  CommonFlags c_ev;
  std::string ev_pot, ev_u0, ev_scheme = "strang";
  int ev_m = 32, ev_power = 4, ev_modes = 16;
  double ev_lambda = 1.0, ev_dt = 1e-3, ev_T = 1.0, ev_snap = 0.1;
  bool ev_alias = false;
  auto* ev = app.add_subcommand("evolve", "truncated NLS flow");
  add_common(ev, c_ev);
  ev->add_option("--potential", ev_pot, "potential field record");
  ev->add_option("--max-freq", ev_m, "Galerkin band M");
  ev->add_option("--u0", ev_u0, "initial field record");
  ev->add_option("--m", ev_power, "nonlinearity power");
  ev->add_option("--lambda", ev_lambda, "coupling");
  ev->add_option("--modes", ev_modes, "eigenmode count N");
  ev->add_option("--dt", ev_dt, "time step");
  ev->add_option("--T", ev_T, "horizon");
  ev->add_option("--scheme", ev_scheme, "strang | picard");
  ev->add_option("--snap-every", ev_snap, "snapshot interval");
  ev->add_flag("--allow-aliasing", ev_alias, "skip dealiasing (speed)");

  // threshold
  CommonFlags c_th;
  int th_m = 4;
  double th_kappa = 0.5;
  auto* th = app.add_subcommand("threshold", "critical regularity sigma_kappa(m)");
  add_common(th, c_th);
  th->add_option("--m", th_m, "nonlinearity power");
  th->add_option("--kappa", th_kappa, "regularity gap");

  // gibbs-sample
  CommonFlags c_gs;
  std::string gs_pot;
  int gs_m = 32, gs_modes = 16, gs_count = 2000, gs_power = 4;
  double gs_lambda = 1.0, gs_B = -1.0;
  auto* gs = app.add_subcommand("gibbs-sample", "sample the Gaussian measure, attach Gibbs weights");
  add_common(gs, c_gs);
  gs->add_option("--potential", gs_pot, "potential field record");
  gs->add_option("--max-freq", gs_m, "Galerkin band M");
  gs->add_option("--modes", gs_modes, "retained eigenmodes");
  gs->add_option("--count", gs_count, "sample count");
  gs->add_option("--lambda", gs_lambda, "coupling (sign = focusing/defocusing)");
  gs->add_option("--m", gs_power, "nonlinearity power");
  gs->add_option("--B", gs_B, "mass cutoff (negative = none)");

  // invariance
  CommonFlags c_inv;
  std::string inv_dir, inv_obs = "mass,l4,mode1,h14";
  double inv_T = 1.0, inv_dt = 1e-3;
  int inv_boot = 1000;
  auto* inv = app.add_subcommand("invariance", "Gibbs-measure invariance experiment");
  add_common(inv, c_inv);
  inv->add_option("--ensemble", inv_dir, "ensemble directory from gibbs-sample");
  inv->add_option("--T", inv_T, "evolution horizon");
  inv->add_option("--dt", inv_dt, "time step");
  inv->add_option("--observables", inv_obs, "comma list: mass,l4,mode1,h14");
  inv->add_option("--bootstrap", inv_boot, "bootstrap replicates (>= 500)");

  // regularity
  CommonFlags c_reg;
  std::string reg_field, reg_profile = "sharp";
  int reg_jmin = 3, reg_jmax = 8;
  double reg_lo = 0.0, reg_hi = 0.0;
  auto* reg = app.add_subcommand("regularity", "block norms and Hoelder slope of a field");
  add_common(reg, c_reg);
  reg->add_option("--field", reg_field, "field record");
  reg->add_option("--profile", reg_profile, "sharp | smooth");
  reg->add_option("--j-min", reg_jmin, "first block");
  reg->add_option("--j-max", reg_jmax, "last block");
  reg->add_option("--band-lo", reg_lo, "acceptance band low edge (0,0 = no gate)");
  reg->add_option("--band-hi", reg_hi, "acceptance band high edge");

  // reproduce
  std::string rep_manifest;
  auto* rep = app.add_subcommand("reproduce", "re-run a manifest and compare digests");
  rep->add_option("manifest", rep_manifest, "path to manifest.json")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      anls::ordered_json p;
      if (gen->count("--kind")) p["kind"] = gen_kind;
      if (gen->count("--max-freq")) p["max_freq"] = gen_m;
      if (gen->count("--kappa")) p["kappa"] = gen_kappa;
      if (gen->count("--in")) p["in"] = gen_in;
      if (!p.contains("kind") && c_gen.config_file.empty()) p["kind"] = gen_kind;
      if (!p.contains("max_freq") && c_gen.config_file.empty()) p["max_freq"] = gen_m;
      return dispatch(make_config("gen-potential", gen, c_gen, p));
    }
    if (spectrum->parsed()) {
      anls::ordered_json p;
      if (spectrum->count("--potential")) p["potential"] = spec_pot;
      if (spectrum->count("--max-freq")) p["max_freq"] = spec_m;
      if (spectrum->count("--fields-limit")) p["fields_limit"] = spec_limit;
      return dispatch(make_config("spectrum", spectrum, c_spec, p));
    }
    if (gc->parsed()) {
      anls::ordered_json p;
      if (gc->count("--potential")) p["potential"] = gc_pot;
      if (gc->count("--probes")) p["probes"] = gc_probes;
      return dispatch(make_config("gamma-check", gc, c_gc, p));
    }
    if (stri->parsed()) {
      anls::ordered_json p;
      if (stri->count("--potential")) p["potential"] = str_pot;
      if (stri->count("--max-freq")) p["max_freq"] = str_m;
      if (stri->count("--kappa")) p["kappa"] = str_kappa;
      if (stri->count("--eps")) p["eps"] = str_eps;
      if (stri->count("--blocks")) p["blocks"] = str_blocks;
      if (stri->count("--samples")) p["samples"] = str_samples;
      if (stri->count("--n-time")) p["n_time"] = str_ntime;
      return dispatch(make_config("strichartz", stri, c_str, p));
    }
    if (ev->parsed()) {
      anls::ordered_json p;
      if (ev->count("--potential")) p["potential"] = ev_pot;
      if (ev->count("--max-freq")) p["max_freq"] = ev_m;
      if (ev->count("--u0")) p["u0"] = ev_u0;
      if (ev->count("--m")) p["m"] = ev_power;
      if (ev->count("--lambda")) p["lambda"] = ev_lambda;
      if (ev->count("--modes")) p["modes"] = ev_modes;
      if (ev->count("--dt")) p["dt"] = ev_dt;
      if (ev->count("--T")) p["T"] = ev_T;
      if (ev->count("--scheme")) p["scheme"] = ev_scheme;
      if (ev->count("--snap-every")) p["snap_every"] = ev_snap;
      if (ev->count("--allow-aliasing")) p["allow_aliasing"] = ev_alias;
      return dispatch(make_config("evolve", ev, c_ev, p));
    }
    if (th->parsed()) {
      anls::ordered_json p;
      if (th->count("--m")) p["m"] = th_m;
      if (th->count("--kappa")) p["kappa"] = th_kappa;
      if (!p.contains("m") && c_th.config_file.empty()) p["m"] = th_m;
      if (!p.contains("kappa") && c_th.config_file.empty()) p["kappa"] = th_kappa;
      return dispatch(make_config("threshold", th, c_th, p));
    }
    if (gs->parsed()) {
      anls::ordered_json p;
      if (gs->count("--potential")) p["potential"] = gs_pot;
      if (gs->count("--max-freq")) p["max_freq"] = gs_m;
      if (gs->count("--modes")) p["modes"] = gs_modes;
      if (gs->count("--count")) p["count"] = gs_count;
      if (gs->count("--lambda")) p["lambda"] = gs_lambda;
      if (gs->count("--m")) p["m"] = gs_power;
      if (gs->count("--B")) p["B"] = gs_B;
      return dispatch(make_config("gibbs-sample", gs, c_gs, p));
    }
    if (inv->parsed()) {
      anls::ordered_json p;
      if (inv->count("--ensemble")) p["ensemble"] = inv_dir;
      if (inv->count("--T")) p["T"] = inv_T;
      if (inv->count("--dt")) p["dt"] = inv_dt;
      if (inv->count("--observables")) p["observables"] = inv_obs;
      if (inv->count("--bootstrap")) p["bootstrap"] = inv_boot;
      return dispatch(make_config("invariance", inv, c_inv, p));
    }
    if (reg->parsed()) {
      anls::ordered_json p;
      if (reg->count("--field")) p["field"] = reg_field;
      if (reg->count("--profile")) p["profile"] = reg_profile;
      if (reg->count("--j-min")) p["j_min"] = reg_jmin;
      if (reg->count("--j-max")) p["j_max"] = reg_jmax;
      if (reg->count("--band-lo")) p["band_lo"] = reg_lo;
      if (reg->count("--band-hi")) p["band_hi"] = reg_hi;
      return dispatch(make_config("regularity", reg, c_reg, p));
    }
    if (rep->parsed()) {
      std::string report;
      int code = anls::reproduce(rep_manifest, &report);
      if (code != 0) std::fputs(report.c_str(), stderr);
      else std::puts("digests match");
      return code;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
