// iic: identifiability of edge coefficients in linear SEMs with latent
// confounders. Subcommands: classify, verify, bench, estimate, fixture,
// discover-iv.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "iic/closure.hpp"
#include "iic/estimate.hpp"
#include "iic/experiments.hpp"
#include "iic/fixtures.hpp"
#include "iic/io.hpp"
#include "iic/oracle.hpp"
#include "iic/threading.hpp"

namespace {

uint64_t seed_from_env_or(uint64_t fallback) {
  if (const char* s = std::getenv("IIC_RNG_SEED")) {
    try {
      return std::stoull(s);
    } catch (...) {
    }
  }
  return fallback;
}

std::ostream& out_stream(const std::string& path, std::ofstream& file) {
  if (path == "-" || path.empty()) return std::cout;
  file.open(path);
  if (!file) throw iic::Error(iic::Err::ParseError, "cannot open output file: " + path);
  return file;
}

iic::MixedGraph load_graph(const std::string& path) {
  return iic::graph_from_json(iic::read_stream_or_file(path));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generic identifiability of linear SEM edge coefficients"};
  app.require_subcommand(1);

  uint64_t rng_seed = seed_from_env_or(20260809);
  int jobs = 1;

  // classify
  auto* classify = app.add_subcommand("classify", "run the identification closure");
  std::string cl_graph = "-", cl_seeds, cl_out = "-";
  bool cl_no_single = false, cl_witnesses = false;
  classify->add_option("--graph,graph", cl_graph, "graph JSON path or -");
  classify->add_option("--seeds", cl_seeds, "seed spec JSON path");
  classify->add_option("--out", cl_out, "output CSV path or -");
  classify->add_flag("--no-single-unknown", cl_no_single, "disable the single-unknown rule");
  classify->add_flag("--emit-witnesses", cl_witnesses, "append witness JSON for identified edges");

  // verify
  auto* verify = app.add_subcommand("verify", "compare the closure with the numerical oracle");
  std::string vf_graph = "-", vf_seeds, vf_out = "-";
  int vf_trials = 50;
  double vf_tol = 1e-8, vf_step = 1e-7;
  verify->add_option("--graph,graph", vf_graph, "graph JSON path or -");
  verify->add_option("--seeds", vf_seeds, "seed spec JSON path");
  verify->add_option("--trials", vf_trials, "oracle trials per edge");
  verify->add_option("--tol", vf_tol, "null-space coordinate tolerance");
  verify->add_option("--fd-step", vf_step, "finite-difference step");
  verify->add_option("--jobs", jobs, "worker threads");
  verify->add_option("--rng-seed", rng_seed, "root RNG seed");
  verify->add_option("--out", vf_out, "output CSV path or -");

  // bench
  auto* bench = app.add_subcommand("bench", "run a named experiment");
  std::string bn_name, bn_out = "-";
  iic::ExperimentConfig bn_cfg;
  bn_cfg.rng_seed = rng_seed;
  bench->add_option("experiment", bn_name, "experiment name")->required();
  bench->add_option("--n", bn_cfg.n, "graph size");
  bench->add_option("--k", bn_cfg.k, "intervened nodes");
  bench->add_option("--graphs", bn_cfg.graphs, "number of random graphs");
  bench->add_option("--p-dir", bn_cfg.p_dir, "directed edge probability");
  bench->add_option("--p-bi", bn_cfg.p_bi, "bidirected edge probability");
  bench->add_option("--rng-seed", bn_cfg.rng_seed, "root RNG seed");
  bench->add_option("--jobs", bn_cfg.jobs, "worker threads");
  bench->add_option("--out", bn_out, "output CSV path or -");

  // estimate
  auto* estimate = app.add_subcommand("estimate", "finite-sample plug-in estimation");
  std::string es_graph = "-", es_data, es_seeds, es_out = "-";
  int es_boot = 200;
  estimate->add_option("--graph,graph", es_graph, "graph JSON path or -");
  estimate->add_option("--data", es_data, "data CSV path")->required();
  estimate->add_option("--seeds", es_seeds, "seed spec JSON path");
  estimate->add_option("--boot", es_boot, "bootstrap replicates");
  estimate->add_option("--rng-seed", rng_seed, "root RNG seed");
  estimate->add_option("--out", es_out, "output CSV path or -");

  // fixture
  auto* fixture_cmd = app.add_subcommand("fixture", "print a built-in study graph");
  std::string fx_name;
  bool fx_seeds = false;
  fixture_cmd->add_option("name", fx_name, "fixture name")->required();
  fixture_cmd->add_flag("--seeds", fx_seeds, "print the canonical seed spec instead");

  // discover-iv
  auto* discover = app.add_subcommand("discover-iv", "brute-force valid IV triples");
  std::string dv_graph = "-";
  discover->add_option("--graph,graph", dv_graph, "graph JSON path or -");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*classify) {
      iic::MixedGraph g = load_graph(cl_graph);
      iic::SeedSet seeds;
      if (!cl_seeds.empty())
        seeds = iic::resolve_seeds(g, iic::seedspec_from_json(iic::read_stream_or_file(cl_seeds), g));
      iic::ClosureOptions opt;
      opt.single_unknown_rule = !cl_no_single;
      auto res = iic::iic_close({g, seeds, {}}, opt);
      std::ofstream file;
      auto& os = out_stream(cl_out, file);
      std::ostringstream cfg;
      cfg << "classify graph=" << cl_graph << " seeds=" << cl_seeds
          << " single_unknown=" << !cl_no_single;
      iic::write_result_csv(os, g, res, rng_seed, cfg.str());
      if (cl_witnesses) {
        for (const auto& [e, prov] : res.provenance)
          if (prov.witness) os << iic::witness_to_json(g, *prov.witness) << "\n";
      }
    } else if (*verify) {
      iic::MixedGraph g = load_graph(vf_graph);
      iic::SeedSet seeds;
      if (!vf_seeds.empty())
        seeds = iic::resolve_seeds(g, iic::seedspec_from_json(iic::read_stream_or_file(vf_seeds), g));
      auto res = iic::iic_close({g, seeds, {}});
      iic::OracleOptions opts;
      opts.trials = vf_trials;
      opts.tol = vf_tol;
      opts.fd_step = vf_step;
      opts.rng_seed = rng_seed;
      // intervention seeds are axioms; hold their coordinates fixed
      for (const auto& e : seeds.edges)
        if (seeds.info.at(e).tag == iic::EstimatorTag::InterventionRegression)
          opts.known_edges.push_back(e);
      const auto& D = g.directed();
      std::vector<bool> truth(D.size());
      {
        auto all = iic::oracle_identifiable_all(g, opts);
        truth = all;
      }
      std::ofstream file;
      auto& os = out_stream(vf_out, file);
      os << "# iic v0.1.0 rng_seed=" << rng_seed << " trials=" << vf_trials << " tol=" << vf_tol
         << "\n";
      os << "edge,iic_status,oracle_identifiable,agree\n";
      int disagreements = 0;
      for (size_t k = 0; k < D.size(); ++k) {
        auto st = res.status.at(D[k]);
        bool agree = true;
        if (st == iic::EdgeStatus::Identified) agree = truth[k];
        if (st == iic::EdgeStatus::NonIdentifiable) agree = !truth[k];
        if (!agree) disagreements++;
        os << g.label(D[k].first) << "->" << g.label(D[k].second) << "," << to_string(st) << ","
           << (truth[k] ? "true" : "false") << "," << (agree ? "yes" : "NO") << "\n";
      }
      if (disagreements > 0) {
        std::cerr << "verify: " << disagreements << " disagreement(s)\n";
        return 1;
      }
    } else if (*bench) {
      std::ofstream file;
      auto& os = out_stream(bn_out, file);
      iic::run_experiment(bn_name, bn_cfg, os);
    } else if (*estimate) {
      iic::MixedGraph g = load_graph(es_graph);
      iic::SeedSpec spec;
      if (!es_seeds.empty()) spec = iic::seedspec_from_json(iic::read_stream_or_file(es_seeds), g);
      std::ifstream df(es_data);
      if (!df) throw iic::Error(iic::Err::ParseError, "cannot open data file: " + es_data);
      iic::Dataset data = iic::dataset_from_csv(df, g);
      iic::EstimateOptions opts;
      opts.n_boot = es_boot;
      opts.rng_seed = rng_seed;
      auto res = iic::iic_estimate(g, data, spec, opts);
      std::ofstream file;
      auto& os = out_stream(es_out, file);
      os << "# iic v0.1.0 rng_seed=" << rng_seed << " boot=" << es_boot << "\n";
      os << "edge,estimate,se,ci_lo,ci_hi\n";
      for (const auto& [e, v] : res.estimates) {
        os << g.label(e.first) << "->" << g.label(e.second) << "," << v;
        if (res.se.count(e))
          os << "," << res.se.at(e) << "," << res.ci.at(e).first << "," << res.ci.at(e).second;
        else
          os << ",,,";
        os << "\n";
      }
      for (const auto& [e, why] : res.unestimated)
        os << g.label(e.first) << "->" << g.label(e.second) << ",unestimated: " << why << ",,,\n";
    } else if (*fixture_cmd) {
      auto f = iic::fixture(fx_name);
      if (fx_seeds)
        std::cout << iic::seedspec_to_json(f.seeds, f.graph) << "\n";
      else
        std::cout << iic::graph_to_json(f.graph) << "\n";
    } else if (*discover) {
      iic::MixedGraph g = load_graph(dv_graph);
      for (const auto& t : iic::discover_iv_triples(g))
        std::cout << g.label(t.z) << "," << g.label(t.t) << "," << g.label(t.y) << "\n";
    }
  } catch (const iic::Error& e) {
    std::cerr << "iic: " << e.what() << "\n";
    // missing inputs and malformed invocations are usage errors
    return (e.code == iic::Err::ParseError || e.code == iic::Err::UnknownExperiment) ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "iic: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
