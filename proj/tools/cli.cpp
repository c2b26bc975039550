#include "cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "netsmith/errors.hpp"
#include "netsmith/format.hpp"
#include "netsmith/gain_analysis.hpp"
#include "netsmith/io.hpp"
#include "netsmith/lmi.hpp"
#include "netsmith/simulation.hpp"
#include "netsmith/smith_design.hpp"
#include "netsmith/stability.hpp"

namespace netsmith::cli {

namespace {

using io::json;

struct Outputs {
  json config = json::object();
  std::vector<std::pair<std::string, std::string>> files;  // path, content

  void add_input(const std::string& key, const std::string& path) {
    config[key + "_fnv1a"] = io::hex64(io::fnv1a64(io::read_text_file(path)));
  }
  std::string hash() const { return io::hash_of(config); }

  void write(const std::string& command, const std::string& manifest_path) const {
    json outs = json::array();
    for (const auto& [path, content] : files) {
      io::write_text_file(path, content);
      outs.push_back({{"path", std::filesystem::path(path).filename().string()}, {"fnv1a", io::hex64(io::fnv1a64(content))}});
    }
    if (manifest_path.empty()) return;
    json m{{"command", command}, {"config", config}, {"config_hash", hash()}, {"outputs", outs}};
    io::write_text_file(manifest_path, m.dump(1) + "\n");
  }
};

int parse_int(const std::string& s, const std::string& what) {
  size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(s, &pos);
  } catch (const std::exception&) {
    throw ValidationError("invalid " + what + ": " + s);
  }
  if (pos != s.size()) throw ValidationError("invalid " + what + ": " + s);
  return v;
}

std::pair<int, int> parse_range(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) {
    const int v = parse_int(s, "range");
    return {0, v};
  }
  return {parse_int(s.substr(0, colon), "range start"), parse_int(s.substr(colon + 1), "range end")};
}

Signal parse_sequence(const std::string& s) {
  if (s == "zero" || s == "0") return Signal::zero();
  if (s.rfind("step", 0) == 0) {
    double amp = 1.0;
    long start = 0;
    std::string rest = s.substr(4);
    if (!rest.empty()) {
      if (rest[0] != ':') throw ValidationError("sequence must be zero or step[:amplitude[@start]]");
      rest = rest.substr(1);
      const auto at = rest.find('@');
      try {
        amp = std::stod(rest.substr(0, at));
        if (at != std::string::npos) start = std::stol(rest.substr(at + 1));
      } catch (const std::exception&) {
        throw ValidationError("invalid signal: " + s);
      }
    }
    return Signal::step(amp, start);
  }
  throw ValidationError("sequence must be zero or step[:amplitude[@start]]");
}

void print_json(std::ostream& out, const json& j) { out << j.dump(1) << '\n'; }

// ---------------------------------------------------------------- design

struct DesignCmd {
  std::string plant, controller, prefilter, output = "design.json", manifest;
  double lambda = 0.9;
  std::optional<int> tau_plant;
  int tau_net_min = 0;
  int tau_net_max = 0;
  std::optional<double> slow;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("design", "build the filter F and predictor block H");
    c->add_option("plant", plant, "plant JSON (delay-free part, optional d_hat)")->required()->check(CLI::ExistingFile);
    c->add_option("controller", controller, "controller JSON")->required()->check(CLI::ExistingFile);
    c->add_option("prefilter", prefilter, "prefilter JSON")->required()->check(CLI::ExistingFile);
    c->add_option("--lambda", lambda, "filter pole location in [0, 1)");
    c->add_option("--tau-plant", tau_plant, "constant plant delay d_hat (samples)");
    c->add_option("--tau-net-min", tau_net_min, "minimum network delay (samples)");
    c->add_option("--tau-net-max", tau_net_max, "maximum network delay (samples)");
    c->add_option("--slow-pole-threshold", slow, "also compensate stable plant poles with at least this modulus");
    c->add_option("-o,--output", output, "design JSON to write");
    c->add_option("--manifest", manifest, "run manifest (default <output>.manifest.json)");
  }

  int run(std::ostream& out) {
    const json pj = io::read_json_file(plant);
    const lti::RationalTF p = io::tf_from_json(pj);
    const lti::RationalTF c = io::tf_from_json(io::read_json_file(controller));
    const lti::RationalTF v = io::tf_from_json(io::read_json_file(prefilter));
    int d_hat = 0;
    if (tau_plant) d_hat = *tau_plant;
    else if (pj.contains("d_hat")) d_hat = pj.at("d_hat").get<int>();
    else throw ValidationError("plant delay missing: pass --tau-plant or set d_hat in the plant file");

    const PredictorDesign d = make_design(p, c, v, d_hat, tau_net_min, tau_net_max, {lambda, slow});
    Outputs o;
    o.add_input("plant", plant);
    o.add_input("controller", controller);
    o.add_input("prefilter", prefilter);
    o.config["lambda"] = lambda;
    o.config["d_hat"] = d_hat;
    o.config["tau_net_min"] = tau_net_min;
    o.config["tau_net_max"] = tau_net_max;
    o.config["slow_pole_threshold"] = slow ? json(*slow) : json(nullptr);
    json doc = io::design_to_json(d);
    doc["config_hash"] = o.hash();
    o.files.push_back({output, doc.dump(1) + "\n"});
    o.write("design", manifest.empty() ? output + ".manifest.json" : manifest);

    const DesignResiduals r = residuals(d);
    out << "tau_hat=" << d.tau_hat() << " tau_bar=" << d.tau_bar() << " lambda=" << fmt17(lambda) << '\n';
    out << "filter_order=" << d.filter.order() << " predictor_order=" << d.predictor_block.order() << '\n';
    out << "dc_gain_error=" << fmt17(r.dc_gain_error) << '\n';
    for (const auto& e : r.interpolation)
      out << "residual node=" << fmt17(e.node.real()) << (e.node.imag() >= 0 ? "+" : "") << fmt17(e.node.imag()) << "j"
          << " derivative=" << e.derivative << " value=" << fmt17(e.residual) << '\n';
    for (double rad : r.h_pole_radii) out << "H pole radius " << fmt17(rad) << '\n';
    out << "wrote " << output << '\n';
    return kSuccess;
  }
};

// ---------------------------------------------------------------- check

struct CheckCmd {
  std::string design, protocol = "p1", bode, output;
  std::optional<int> tau_max;
  bool scan = false;
  std::optional<double> alpha_a;
  int bode_points = 512;
  int scan_limit = 1000;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("check", "small-gain stability certificate");
    c->add_option("design", design, "design JSON")->required()->check(CLI::ExistingFile);
    c->add_option("--protocol", protocol, "p1, p2, p3");
    auto* t = c->add_option("--tau-max", tau_max, "delay variation tau_bar to certify (default: from the design)");
    c->add_flag("--scan", scan, "report the largest certified tau_bar")->excludes(t);
    c->add_option("--alpha-a", alpha_a, "plant uncertainty bound ||dP||_inf (uncertain-plant test)");
    c->add_option("--bode", bode, "write omega,mag_dB of |alpha M| to this CSV");
    c->add_option("--bode-points", bode_points, "frequency grid size for --bode");
    c->add_option("--scan-limit", scan_limit, "upper end of the tau_bar scan");
    c->add_option("-o,--output", output, "also write the verdict JSON here");
  }

  int run(std::ostream& out) {
    const PredictorDesign d = io::design_from_json(io::read_json_file(design));
    const ProtocolKind pk = parse_protocol(protocol);
    const LoopGains g = nominal_loop_gains(d);
    auto verdict = [&](int tb) {
      return alpha_a ? uncertain_verdict(g, pk, tb, *alpha_a) : nominal_verdict(g.a21, pk, tb);
    };

    Outputs o;
    o.add_input("design", design);
    o.config["protocol"] = to_string(pk);
    o.config["alpha_a"] = alpha_a ? json(*alpha_a) : json(nullptr);

    json doc;
    int code = kSuccess;
    int tb = tau_max ? *tau_max : d.tau_bar();
    if (scan) {
      int best = -1;
      for (int t = 0; t <= scan_limit && verdict(t).certified; ++t) best = t;
      o.config["scan_limit"] = scan_limit;
      doc = {{"protocol", to_string(pk)},
             {"criterion", alpha_a ? "uncertain" : "nominal"},
             {"max_certified_tau_bar", best},
             {"M_inf", g.a21},
             {"lambda", d.lambda}};
      if (best >= 0) doc["at_max"] = io::verdict_to_json(verdict(best));
      if (best < scan_limit) doc["first_failure"] = io::verdict_to_json(verdict(best + 1));
      tb = std::max(best, 0);
    } else {
      o.config["tau_bar"] = tb;
      const StabilityVerdict v = verdict(tb);
      doc = io::verdict_to_json(v);
      code = v.certified ? kSuccess : kNotCertified;
    }
    doc["config_hash"] = o.hash();
    print_json(out, doc);
    if (!output.empty()) o.files.push_back({output, doc.dump(1) + "\n"});
    if (!bode.empty()) {
      o.config["bode_points"] = bode_points;
      std::ostringstream ss;
      write_bode_csv(ss, bode_sweep(build_M(d), alpha_formula(pk, tb), bode_points));
      o.files.push_back({bode, ss.str()});
    }
    if (!o.files.empty()) o.write("check", o.files.front().first + ".manifest.json");
    return code;
  }
};

// ---------------------------------------------------------------- sweep

struct SweepCmd {
  std::string design, output;
  double lmin = 0.5, lmax = 0.95, lstep = 0.05;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("sweep", "largest certified tau_bar per protocol over a lambda grid");
    c->add_option("design", design, "design JSON (plant, controller, prefilter and delays are reused)")
        ->required()
        ->check(CLI::ExistingFile);
    c->add_option("--lambda-min", lmin);
    c->add_option("--lambda-max", lmax);
    c->add_option("--lambda-step", lstep);
    c->add_option("-o,--output", output, "CSV file (default: stdout)");
  }

  int run(std::ostream& out) {
    if (!(lstep > 0.0) || lmax < lmin) throw ValidationError("lambda grid needs step > 0 and max >= min");
    const PredictorDesign base = io::design_from_json(io::read_json_file(design));
    std::ostringstream ss;
    ss << "lambda,M_inf,p1_max,p2_max,p3_max\n";
    const int n = static_cast<int>(std::floor((lmax - lmin) / lstep + 1e-9));
    for (int i = 0; i <= n; ++i) {
      const double lam = lmin + i * lstep;
      const PredictorDesign d = make_design(base.plant_nominal, base.controller, base.prefilter, base.d_hat,
                                            base.tau_n_min, base.tau_n_max, {lam, base.slow_pole_threshold});
      const double m = lti::inf_norm(build_M(d));
      ss << fmt17(lam) << ',' << fmt17(m) << ',' << max_certified_tau(m, Protocol::p1) << ','
         << max_certified_tau(m, Protocol::p2) << ',' << max_certified_tau(m, Protocol::p3) << '\n';
    }
    if (output.empty()) {
      out << ss.str();
    } else {
      Outputs o;
      o.add_input("design", design);
      o.config["lambda_grid"] = {lmin, lmax, lstep};
      o.files.push_back({output, ss.str()});
      o.write("sweep", output + ".manifest.json");
    }
    return kSuccess;
  }
};

// ---------------------------------------------------------------- oracle / gain / asymptote

struct OracleCmd {
  std::string protocol = "p3", argmax;
  int tau_max = 1;
  int horizon = 2;
  bool single = false;
  double v_bar = 1.0;
  double budget = 1e9;
  unsigned threads = 0;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("oracle", "exhaustive worst-case alpha_T over delay patterns");
    c->add_option("--protocol", protocol, "p1, p2, p3");
    c->add_option("--tau-max", tau_max, "maximal delay variation tau_bar");
    c->add_option("--horizon", horizon, "largest step length index T");
    c->add_flag("--single", single, "only evaluate T = horizon");
    c->add_option("--v-bar", v_bar, "step amplitude");
    c->add_option("--budget", budget, "maximum number of delay assignments");
    c->add_option("--threads", threads, "worker threads (0: one per delay of the first packet)");
    c->add_option("--argmax", argmax, "write the maximizing delays for T = horizon as j,tau CSV");
  }

  int run(std::ostream& out) {
    const ProtocolKind pk = parse_protocol(protocol);
    if (horizon < 0) throw ValidationError("horizon must be non-negative");
    OracleOptions opt{v_bar, budget, threads};
    const double alpha = alpha_formula(pk, tau_max);
    out << "T,alpha_T,alpha_analytic\n";
    OracleResult last;
    for (int T = single ? horizon : 0; T <= horizon; ++T) {
      last = oracle_gain(pk.variant, tau_max, T, opt);
      out << T << ',' << fmt17(last.alpha_T) << ',' << fmt17(alpha) << '\n';
    }
    if (!argmax.empty()) {
      PacketTrace t{last.head_delays, 0, tau_max};
      std::ostringstream ss;
      write_trace_csv(ss, t);
      Outputs o;
      o.config = {{"protocol", to_string(pk)}, {"tau_bar", tau_max}, {"horizon", horizon}, {"v_bar", v_bar}};
      o.files.push_back({argmax, ss.str()});
      o.write("oracle", argmax + ".manifest.json");
    }
    return kSuccess;
  }
};

struct GainCmd {
  std::string protocol = "all", range = "0:10";

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("gain", "analytic delay gains alpha(tau_bar)");
    c->add_option("--protocol", protocol, "p1, p2, p3 or all");
    c->add_option("--tau-max-range", range, "lo:hi range of tau_bar");
  }

  int run(std::ostream& out) {
    const auto [lo, hi] = parse_range(range);
    if (lo < 0 || hi < lo) throw ValidationError("tau range must satisfy 0 <= lo <= hi");
    if (protocol == "all") {
      out << "tau_bar,alpha_p1,alpha_p2,alpha_p3\n";
      for (int t = lo; t <= hi; ++t)
        out << t << ',' << fmt17(alpha_formula(Protocol::p1, t)) << ',' << fmt17(alpha_formula(Protocol::p2, t)) << ','
            << fmt17(alpha_formula(Protocol::p3, t)) << '\n';
    } else {
      const ProtocolKind pk = parse_protocol(protocol);
      out << "tau_bar,alpha\n";
      for (int t = lo; t <= hi; ++t) out << t << ',' << fmt17(alpha_formula(pk, t)) << '\n';
    }
    return kSuccess;
  }
};

struct AsymptoteCmd {
  int tau_max = 2;
  int horizon = 200;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("asymptote", "closed-form alpha_T table and its limit");
    c->add_option("--tau-max", tau_max, "delay variation tau_bar");
    c->add_option("--horizon", horizon, "largest T");
  }

  int run(std::ostream& out) {
    const AsymptoteTable t = alpha_asymptote_check(tau_max, horizon);
    out << "T,alpha_T,alpha,abs_error,transient,periodic\n";
    for (const auto& r : t.rows)
      out << r.T << ',' << fmt17(r.alpha_T) << ',' << fmt17(t.alpha) << ',' << fmt17(r.error) << ','
          << fmt17(r.transient) << ',' << fmt17(r.periodic) << '\n';
    return kSuccess;
  }
};

// ---------------------------------------------------------------- simulate

struct SimulateCmd {
  std::string design, protocol = "p1", delays = "pattern", output = "trace.csv", manifest, model = "packetized";
  std::string reference = "step", disturbance = "zero";
  std::optional<std::uint64_t> seed;
  std::optional<int> tau_net_max;
  int steps = 300;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("simulate", "closed-loop time response");
    c->add_option("design", design, "design JSON")->required()->check(CLI::ExistingFile);
    c->add_option("--protocol", protocol, "p1, p2, p3-oldest, p3-newest, p3-random:<seed>");
    c->add_option("--delays", delays, "pattern[:offset], random (needs --seed), constant:<c> or a j,tau CSV file");
    c->add_option("--seed", seed, "64-bit seed for random delays");
    c->add_option("--steps", steps, "horizon");
    c->add_option("--model", model, "packetized or sample-delay");
    c->add_option("--reference", reference, "zero or step[:amplitude[@start]]");
    c->add_option("--disturbance", disturbance, "plant-input disturbance, same syntax as --reference");
    c->add_option("--tau-net-max", tau_net_max, "override the design's maximum network delay");
    c->add_option("-o,--output", output, "trace CSV");
    c->add_option("--manifest", manifest, "run manifest (default <output>.manifest.json)");
  }

  int run(std::ostream& out) {
    PredictorDesign d = io::design_from_json(io::read_json_file(design));
    if (tau_net_max) {
      validate_delay_bounds(d.d_hat, d.tau_n_min, *tau_net_max);
      d.tau_n_max = *tau_net_max;
    }
    if (steps < 1) throw ValidationError("--steps must be at least 1");
    SimScenario s;
    s.design = d;
    s.protocol = parse_protocol(protocol);
    s.steps = steps;
    s.reference = parse_sequence(reference);
    s.disturbance = parse_sequence(disturbance);
    if (model == "packetized") s.model = SimModel::packetized;
    else if (model == "sample-delay") s.model = SimModel::sample_delay;
    else throw ValidationError("--model must be packetized or sample-delay");

    Outputs o;
    o.add_input("design", design);
    const auto n = static_cast<size_t>(steps);
    if (delays.rfind("pattern", 0) == 0) {
      size_t offset = 0;
      if (delays.size() > 7) {
        if (delays[7] != ':') throw ValidationError("delay pattern must be pattern[:offset]");
        offset = static_cast<size_t>(parse_int(delays.substr(8), "pattern offset"));
      }
      s.trace = PacketTrace::worst_case(n, d.tau_n_min, d.tau_n_max, offset);
    } else if (delays == "random") {
      if (!seed) throw ValidationError("random delays require an explicit --seed");
      s.trace = PacketTrace::uniform(n, d.tau_n_min, d.tau_n_max, *seed);
    } else if (delays.rfind("constant:", 0) == 0) {
      const int c = parse_int(delays.substr(9), "constant delay");
      s.trace = PacketTrace{std::vector<int>(n, c), d.tau_n_min, d.tau_n_max};
    } else {
      std::ifstream in(delays);
      if (!in) throw ValidationError("cannot open delay file " + delays);
      s.trace = read_trace_csv(in, d.tau_n_min, d.tau_n_max);
      o.add_input("delays", delays);
    }
    const SimTrace tr = simulate(s);

    o.config["protocol"] = to_string(s.protocol);
    o.config["delays"] = std::filesystem::exists(delays) ? "file" : delays;
    o.config["seed"] = seed ? json(*seed) : json(nullptr);
    o.config["steps"] = steps;
    o.config["model"] = model;
    o.config["reference"] = reference;
    o.config["disturbance"] = disturbance;
    o.config["tau_net_min"] = d.tau_n_min;
    o.config["tau_net_max"] = d.tau_n_max;
    std::ostringstream ss;
    write_sim_csv(ss, tr);
    o.files.push_back({output, ss.str()});
    const std::string mpath = manifest.empty() ? output + ".manifest.json" : manifest;
    o.write("simulate", "");
    json m{{"command", "simulate"},
           {"config", o.config},
           {"config_hash", o.hash()},
           {"design_hash", io::hash_of(io::design_to_json(d))},
           {"seed", o.config["seed"]},
           {"protocol", to_string(s.protocol)},
           {"bounds", {d.tau_n_min, d.tau_n_max}},
           {"steps_run", tr.records.size()},
           {"max_abs_y", tr.max_abs_y()},
           {"diverged", tr.divergence_step.has_value()},
           {"divergence_step", tr.divergence_step ? json(*tr.divergence_step) : json(nullptr)},
           {"outputs", json::array({{{"path", std::filesystem::path(output).filename().string()},
                                     {"fnv1a", io::hex64(io::fnv1a64(ss.str()))}}})}};
    io::write_text_file(mpath, m.dump(1) + "\n");

    out << "steps=" << tr.records.size() << " max_abs_y=" << fmt17(tr.max_abs_y()) << '\n';
    if (tr.divergence_step) out << "DIVERGED at k=" << *tr.divergence_step << '\n';
    else out << "no divergence\n";
    out << "wrote " << output << '\n';
    return kSuccess;
  }
};

// ---------------------------------------------------------------- lmi

struct LmiCmd {
  std::string design, variant = "ii", output = "lmi.json", csv_dir, candidates;
  double gamma = 0.9;
  std::optional<int> tau_net_max;
  CLI::App* exp = nullptr;
  CLI::App* sizes = nullptr;
  CLI::App* verify = nullptr;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("lmi", "delay-dependent LMI assembly");
    c->add_option("design", design, "design JSON")->required()->check(CLI::ExistingFile);
    c->add_option("--variant", variant, "i or ii");
    c->add_option("--gamma", gamma, "scalar in (0, 1)");
    c->add_option("--tau-net-max", tau_net_max, "maximum network delay (default: from the design)");
    c->require_subcommand(1);
    exp = c->add_subcommand("export", "write the LMI as JSON");
    exp->add_option("-o,--output", output, "LMI JSON");
    exp->add_option("--csv-dir", csv_dir, "also write each constant matrix as CSV into this directory");
    sizes = c->add_subcommand("sizes", "print dimensions and unknown counts");
    verify = c->add_subcommand("verify", "check candidate solutions");
    verify->add_option("candidates", candidates, "JSON object of named matrices")->required()->check(CLI::ExistingFile);
  }

  int run(std::ostream& out) {
    const PredictorDesign d = io::design_from_json(io::read_json_file(design));
    const AugmentedModel m = assemble_augmented(d);
    const LmiProblem p = build_lmi(m, parse_lmi_variant(variant), gamma, tau_net_max.value_or(-1));
    if (sizes->parsed()) {
      json u = json::array();
      for (const auto& x : p.unknowns) u.push_back({{"name", x.name}, {"dim", x.dim}});
      print_json(out, {{"variant", to_string(p.variant)},
                       {"n_xi", p.n_xi},
                       {"block_orders", {m.block_orders.n, m.block_orders.n_H, m.block_orders.n_F, m.block_orders.n_C}},
                       {"size", p.size},
                       {"unknowns", u},
                       {"unknown_count_closed_form", p.closed_form_unknown_count()},
                       {"unknown_count_generic", p.generic_unknown_count()}});
      return kSuccess;
    }
    Outputs o;
    o.add_input("design", design);
    o.config["variant"] = to_string(p.variant);
    o.config["gamma"] = gamma;
    o.config["tau_net_max"] = p.tau_n_max;
    if (exp->parsed()) {
      o.files.push_back({output, export_lmi_json(p)});
      if (!csv_dir.empty()) {
        std::filesystem::create_directories(csv_dir);
        for (const auto& [name, mat] : p.constants) {
          std::ostringstream ss;
          write_matrix_csv(ss, mat);
          o.files.push_back({(std::filesystem::path(csv_dir) / (name + ".csv")).string(), ss.str()});
        }
      }
      o.write("lmi export", output + ".manifest.json");
      out << "wrote " << output << " (size " << p.size << ", " << p.unknowns.size() << " unknowns)\n";
      return kSuccess;
    }
    const FeasibilityReport r = verify_candidate(p, import_candidates_json(io::read_text_file(candidates)));
    out << export_report_json(r);
    return r.feasible ? kSuccess : kNotCertified;
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"netsmith: filtered Smith predictors over packetized networks"};
  app.require_subcommand(1);
  DesignCmd design;
  CheckCmd check;
  SweepCmd sweep;
  OracleCmd oracle;
  GainCmd gain;
  AsymptoteCmd asym;
  SimulateCmd sim;
  LmiCmd lmi;
  design.add(app);
  check.add(app);
  sweep.add(app);
  oracle.add(app);
  gain.add(app);
  asym.add(app);
  sim.add(app);
  lmi.add(app);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kSuccess : kUsage;
  }

  try {
    const CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "design") return design.run(out);
    if (name == "check") return check.run(out);
    if (name == "sweep") return sweep.run(out);
    if (name == "oracle") return oracle.run(out);
    if (name == "gain") return gain.run(out);
    if (name == "asymptote") return asym.run(out);
    if (name == "simulate") return sim.run(out);
    if (name == "lmi") return lmi.run(out);
    err << "unknown command\n";
    return kUsage;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << '\n';
    return kNumeric;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumeric;
  }
}

}  // namespace netsmith::cli
