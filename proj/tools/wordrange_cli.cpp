#include <chrono>
#include <cstdio>
#include <iostream>
#include <stdexcept>

#include <CLI11.hpp>

#include "wordrange/harness.hpp"

using namespace wordrange;

namespace {

void add_common(CLI::App* sub, RunSpec& spec, std::string& variant, std::string& backend) {
  sub->add_option("--w", spec.w, "word size (8, 16, 32, 64)");
  sub->add_option("--B", spec.B, "chunk base or branching factor (probe-bench accepts several)")->delimiter(',');
  sub->add_option("--variant", variant, "core, 5a or 5b")->check(CLI::IsMember({"core", "5a", "5b"}));
  sub->add_option("--backend", backend, "exact or bloomier")->check(CLI::IsMember({"exact", "bloomier"}));
  sub->add_option("--n", spec.n, "capacity or domain size (0 = command default)");
  sub->add_option("--u-bits", spec.u_bits, "universe bits (0 = command default)");
  sub->add_option("--r", spec.r, "Bloomier value width");
  sub->add_option("--epsilon", spec.epsilon, "Bloomier false-positive target");
  sub->add_option("--ops", spec.ops, "operations per trial (0 = command default)");
  sub->add_option("--trials", spec.trials, "seeds (oracle-fuzz), samples (fp-rate) or random pairs, 0 = all (probe-bench)");
  sub->add_option("--seed", spec.seed, "base seed");
  sub->add_flag("--audit", spec.audit, "brute-force audit after every update");
  sub->add_option("--format", spec.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wordrange: word-RAM range reporting, perfect hashing and Bloomier filters"};
  app.require_subcommand(1);
  RunSpec spec;
  std::string variant = "core", backend = "exact";

  struct Cmd {
    const char* name;
    const char* help;
  };
  const Cmd cmds[] = {
      {"oracle-fuzz", "random updates and queries checked against a sorted-set oracle"},
      {"space-report", "measured bits of the Bloomier filter and the perfect hash"},
      {"probe-bench", "greater-than game probe counts (CSV: B,strategy,Tu_max,Tq_max,correct)"},
      {"fp-rate", "Bloomier filter stored-key errors and false-positive rate"},
      {"perfect-hash-demo", "mixed updates against the dynamic perfect hash with injectivity audits"},
  };
  for (const auto& c : cmds) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    add_common(sub, spec, variant, backend);
    if (std::string(c.name) == "probe-bench")
      sub->add_option("--strategy", spec.strategy, "query-heavy, update-heavy or both");
    if (std::string(c.name) == "space-report")
      sub->add_option("--structure", spec.structure, "bloomier, perfecthash or both");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  spec.command = app.get_subcommands().front()->get_name();
  const auto start = std::chrono::steady_clock::now();
  RunOutcome out;
  try {
    spec.variant = parse_variant(variant);
    spec.backend = parse_backend(backend);
    out = run_command(spec);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << '\n';
    return 1;
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  std::cout << out.output << std::flush;
  std::fprintf(stderr, "wall_time_s=%.3f\n", elapsed.count());
  return out.ok ? 0 : 1;
}
