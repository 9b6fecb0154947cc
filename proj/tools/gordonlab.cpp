// gordonlab command-line front end.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "gordonlab/cli.hpp"
#include "gordonlab/config.hpp"
#include "gordonlab/errors.hpp"

using namespace gordonlab;

namespace {

struct RawFlags {
  std::string v1, v2, alpha, theta, energies, m_range, format, out, rational, kind, config;
  double bigC = 1.0, tol = 1e-10, B = 1.0;
  std::optional<double> osc_D, osc_delta;
  std::size_t density = 16;
  unsigned threads = 1;
  bool print_config = false;
};

void add_common(CLI::App* sub, RawFlags& f) {
  sub->add_option("--v1", f.v1, "V1 in the potential DSL");
  sub->add_option("--v2", f.v2, "V2 in the potential DSL");
  sub->add_option("--alpha", f.alpha, "liouville-default | golden | cf:1,2,8 | rational:p/q");
  sub->add_option("--theta", f.theta, "phase p/q in [0, 1)");
  sub->add_option("--energies", f.energies, "comma-separated energies");
  sub->add_option("--bigC", f.bigC, "constant C in C q_m + ln I_m");
  sub->add_option("--m-range", f.m_range, "approximation orders a..b");
  sub->add_option("--tol", f.tol, "integration tolerance");
  sub->add_option("--out", f.out, "output file (default: standard output)");
  sub->add_option("--format", f.format, "csv | json | svg");
  sub->add_option("--density", f.density, "witness grid points per unit length");
  sub->add_option("--threads", f.threads, "worker threads for independent cells");
  sub->add_option("--config", f.config, "read a JSON configuration (flags override it)");
  sub->add_flag("--print-config", f.print_config, "print the canonical JSON configuration and exit");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-decay witnesses for Schroedinger operators with Liouville quasiperiodic potentials"};
  app.require_subcommand(1);
  RawFlags f;
  auto* cf = app.add_subcommand("cf", "continued fraction expansion, convergents, Liouville certificate");
  auto* mono = app.add_subcommand("monodromy", "trace and determinant of approximant monodromies");
  auto* gordon = app.add_subcommand("gordon", "approximant distances C q_m + ln I_m");
  auto* witness = app.add_subcommand("witness", "non-decay witnesses at -q_m, q_m, 2 q_m");
  auto* plot = app.add_subcommand("plot", "SVG line plots");
  for (auto* sub : {cf, mono, gordon, witness, plot}) add_common(sub, f);
  cf->add_option("--rational", f.rational, "expand the rational p/q");
  cf->add_option("--B", f.B, "certification constant B");
  gordon->add_option("--osc-D", f.osc_D, "Holder constant D of the oscillation integral");
  gordon->add_option("--osc-delta", f.osc_delta, "Holder exponent delta");
  plot->add_option("--kind", f.kind, "gordon | profile");
  plot->add_option("--osc-D", f.osc_D, "Holder constant D of the oscillation integral");
  plot->add_option("--osc-delta", f.osc_delta, "Holder exponent delta");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  RunConfig cfg;
  try {
    if (!f.config.empty()) {
      std::ifstream in(f.config);
      if (!in) throw DomainError("cannot read " + f.config);
      cfg = config_from_json(Json::parse(in));
    }
    cfg.command = app.get_subcommands().front()->get_name();
    auto* sub = app.get_subcommands().front();
    auto given = [&](const char* name) { return sub->count(name) > 0; };
    if (given("--v1")) cfg.v1 = f.v1;
    if (given("--v2")) cfg.v2 = f.v2;
    if (given("--alpha")) cfg.alpha = f.alpha;
    if (given("--theta")) cfg.theta = f.theta;
    if (given("--energies")) cfg.energies = parse_energies(f.energies);
    if (given("--bigC")) cfg.bigC = f.bigC;
    if (given("--m-range")) std::tie(cfg.m_lo, cfg.m_hi) = parse_m_range(f.m_range);
    if (given("--tol")) cfg.tol = f.tol;
    if (given("--out")) cfg.out = f.out;
    if (given("--format")) cfg.format = f.format;
    if (given("--density")) cfg.density = f.density;
    if (given("--threads")) cfg.threads = f.threads;
    if (cfg.command == "cf") {
      if (given("--rational")) cfg.rational = f.rational;
      if (given("--B")) cfg.certify_B = f.B;
    }
    if (cfg.command == "gordon" || cfg.command == "plot") {
      if (f.osc_D) cfg.osc_D = f.osc_D;
      if (f.osc_delta) cfg.osc_delta = f.osc_delta;
    }
    if (cfg.command == "plot") {
      if (given("--kind")) cfg.plot_kind = f.kind;
      cfg.format = "svg";
    }
    cfg.validate();
  } catch (const ResourceError& e) {
    std::cerr << "resource budget exceeded: " << e.what() << "\n";
    return kExitResource;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (f.print_config) {
    std::cout << config_to_json(cfg).dump(2) << "\n";
    return kExitOk;
  }
  return run(cfg, std::cout, std::cerr);
}
