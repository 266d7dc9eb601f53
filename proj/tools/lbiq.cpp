#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "lbiq/calculus.hpp"
#include "lbiq/interp.hpp"
#include "lbiq/search.hpp"
#include "lbiq/semantics.hpp"
#include "lbiq/sequent.hpp"
#include "lbiq/syntax.hpp"
#include "lbiq/transform.hpp"

namespace {

using namespace lbiq;

struct Options {
  std::string variant = "id";
  int max_rounds = 6;
  int max_term_depth = 2;
  unsigned long seed = 0;
  std::string format = "text";
  int jobs = 1;
  std::string formula;
  std::string input;
  std::string model;
  int worlds = 2;
  int universe = 2;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_input(const Options& o) {
  if (!o.formula.empty()) {
    if (!o.input.empty()) throw UsageError("give either --formula or an input file, not both");
    return o.formula;
  }
  if (o.input.empty() || o.input == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  }
  std::ifstream in(o.input);
  if (!in) throw UsageError("cannot open " + o.input);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::string trim(std::string s) {
  auto b = s.find_first_not_of(" \t\r\n");
  auto e = s.find_last_not_of(" \t\r\n");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

// A sequent when the text contains a turnstile, otherwise the goal |- w:phi.
Sequent read_goal(const std::string& text, Signature& sig) {
  if (text.find("|-") != std::string::npos) return parse_sequent(text, sig, true);
  return goal_of(parse_formula(text, sig, true));
}

Variant variant_of(const Options& o) {
  auto v = variant_from_name(o.variant);
  if (!v) throw UsageError("unknown variant '" + o.variant + "'");
  return *v;
}

SearchConfig config_of(const Options& o) {
  SearchConfig cfg;
  cfg.variant = variant_of(o);
  cfg.max_rounds = o.max_rounds;
  cfg.max_term_depth = o.max_term_depth;
  cfg.jobs = o.jobs;
  return cfg;
}

int cmd_parse(const Options& o) {
  std::string text = trim(read_input(o));
  Signature sig;
  if (text.find("|-") != std::string::npos) {
    std::cout << to_string(parse_sequent(text, sig, true)) << "\n";
  } else {
    std::cout << to_string(parse_formula(text, sig, true)) << "\n";
  }
  return 0;
}

int cmd_validate(const Options& o) {
  Signature sig;
  Sequent s = read_goal(trim(read_input(o)), sig);
  Validation val = validate(s);
  std::cout << (val.ok ? "valid" : "invalid: " + val.message) << "\n";
  return val.ok ? 0 : 1;
}

int cmd_prove(const Options& o) {
  Signature sig;
  Sequent goal = read_goal(trim(read_input(o)), sig);
  SearchOutcome out = prove(goal, config_of(o));
  std::cerr << "status " << status_name(out.status) << "\n";
  if (out.proof) std::cout << serialize(*out.proof, sig);
  if (out.model) {
    std::cout << "candidate-model depth=" << out.model->depth << " verified=" << (out.model->verified ? 1 : 0)
              << "\n"
              << to_string(Countermodel{out.model->model, out.model->iota, out.model->alpha}, goal);
  }
  for (const auto& w : out.warnings) std::cerr << "warning: " << w << "\n";
  std::cerr << stats_record(out) << "\n";
  return out.status == Status::Proved ? 0 : 1;
}

int cmd_check(const Options& o) {
  Signature sig;
  Proof p = parse_proof(read_input(o), sig);
  CheckResult r = check_proof(p, variant_of(o), true);
  if (r.ok) {
    std::cout << "ok height=" << p.height() << " size=" << p.size() << (has_cut(p) ? " cut" : "") << "\n";
    return 0;
  }
  std::cout << "error at " << r.path << ": " << r.message << "\n";
  return 1;
}

int cmd_cutelim(const Options& o) {
  Signature sig;
  Proof p = parse_proof(read_input(o), sig);
  Variant v = variant_of(o);
  CheckResult r = check_proof(p, v, true);
  if (!r.ok) {
    std::cerr << "input does not check: error at " << r.path << ": " << r.message << "\n";
    return 1;
  }
  CutStats stats;
  Proof out = eliminate_all_cuts(p, v, &stats);
  std::cout << serialize(out, sig);
  std::cerr << "cuts eliminated: calls=" << stats.calls << " measure_checks=" << stats.measure_checks
            << " height=" << out.height() << "\n";
  return 0;
}

int cmd_countermodel(const Options& o) {
  Signature sig;
  Sequent s = read_goal(trim(read_input(o)), sig);
  Variant v = variant_of(o);
  if (v == Variant::IDNoDs) v = Variant::ID;
  auto cm = find_countermodel(s, Bounds{o.worlds, o.universe}, v, o.jobs);
  if (!cm) {
    std::cout << "no countermodel with |W|<=" << o.worlds << " |U|<=" << o.universe << "\n";
    return 1;
  }
  std::cout << to_string(*cm, s);
  return 0;
}

int cmd_eval(const Options& o) {
  if (o.model.empty()) throw UsageError("eval needs --model");
  std::ifstream in(o.model);
  if (!in) throw UsageError("cannot open " + o.model);
  FiniteModel m = parse_model(std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()));
  Variant v = variant_of(o);
  if (v == Variant::IDNoDs) v = Variant::ID;
  ModelCheck mc = check_model(m, v);
  if (!mc.ok) {
    std::cerr << "model is not well-formed: " << mc.violation << "\n";
    return 2;
  }
  Signature sig;
  Sequent s = read_goal(trim(read_input(o)), sig);
  auto f = falsify(m, s);
  if (!f) {
    std::cout << "true under every interpretation and assignment\n";
    return 0;
  }
  std::cout << "false:";
  for (const auto& [l, w] : f->iota) std::cout << " " << l << "->" << m.worlds[static_cast<std::size_t>(w)];
  for (const auto& [x, a] : f->alpha) std::cout << " " << x << "=" << m.universe[static_cast<std::size_t>(a)];
  std::cout << "\n";
  return 1;
}

int cmd_interp(const Options& o) {
  Signature sig;
  Sequent s = read_goal(trim(read_input(o)), sig);
  IntSequentReport rep = classify(s);
  if (!rep.quasi) {
    std::cout << "not quasi-intuitionistic: tree=" << rep.is_tree_rooted << " exclusion_free=" << rep.exclusion_free
              << " available=" << rep.vars_available << " unique_domain=" << rep.domain_atoms_unique << "\n";
    return 1;
  }
  std::cout << to_string(formula_interpretation(s)) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Proof engine for first-order bi-intuitionistic logic (LBIQ polytree calculi)"};
  app.require_subcommand(1);
  Options o;
  auto shared = [&](CLI::App* sub) {
    sub->add_option("--variant", o.variant, "id, cd or id-no-ds")->check(CLI::IsMember({"id", "cd", "id-no-ds"}));
    sub->add_option("--max-rounds", o.max_rounds, "search rounds")->check(CLI::NonNegativeNumber);
    sub->add_option("--max-term-depth", o.max_term_depth, "instantiation term depth")->check(CLI::NonNegativeNumber);
    sub->add_option("--seed", o.seed, "seed recorded in the output");
    sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"text"}));
    sub->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--formula", o.formula, "input text instead of a file");
    sub->add_option("input", o.input, "input file, or - for stdin");
  };
  struct Entry {
    const char* name;
    const char* help;
    int (*run)(const Options&);
  };
  const Entry entries[] = {
      {"parse", "parse and print a formula or sequent", cmd_parse},
      {"validate", "check the polytree conditions of a sequent", cmd_validate},
      {"prove", "search for a proof", cmd_prove},
      {"check", "check a proof file", cmd_check},
      {"cutelim", "eliminate every cut from a proof file", cmd_cutelim},
      {"countermodel", "exhaustive finite countermodel search", cmd_countermodel},
      {"eval", "evaluate a sequent on a model file", cmd_eval},
      {"interp", "formula interpretation of a quasi-intuitionistic sequent", cmd_interp},
  };
  std::map<CLI::App*, const Entry*> table;
  for (const auto& e : entries) {
    CLI::App* sub = app.add_subcommand(e.name, e.help);
    shared(sub);
    if (std::string(e.name) == "countermodel") {
      sub->add_option("--worlds", o.worlds, "maximum number of worlds")->check(CLI::PositiveNumber);
      sub->add_option("--universe", o.universe, "maximum number of elements")->check(CLI::PositiveNumber);
    }
    if (std::string(e.name) == "eval") sub->add_option("--model", o.model, "model file")->required();
    table[sub] = &e;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  try {
    for (const auto& [sub, e] : table)
      if (sub->parsed()) return e->run(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
