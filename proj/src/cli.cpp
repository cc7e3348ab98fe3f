#include "dfun/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dfun/dfun.hpp"

namespace dfun {
namespace {

namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw usage_error("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Artifacts are collected first and written together so a failure leaves no partial output.
class Outputs {
 public:
  void add(std::string path, std::string content) { files_.emplace_back(std::move(path), std::move(content)); }

  void commit() const {
    for (const auto& [path, content] : files_) {
      const fs::path target(path);
      if (target.has_parent_path()) fs::create_directories(target.parent_path());
      const fs::path tmp = target.string() + ".tmp";
      {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw usage_error("cannot write '" + tmp.string() + "'");
        out << content;
        if (!out.flush()) throw usage_error("cannot write '" + tmp.string() + "'");
      }
      fs::rename(tmp, target);
    }
  }

 private:
  std::vector<std::pair<std::string, std::string>> files_;
};

std::optional<Alphabet> level_alphabet(const std::string& level) {
  if (level == "operator") return Alphabet::operators();
  return std::nullopt;
}

DiscreteFunction load_table(const std::string& path, const std::string& level) {
  try {
    return parse_table(read_file(path), level_alphabet(level));
  } catch (const parse_error& e) {
    throw parse_error(path + ": " + e.what(), 0, 0);
  }
}

DiscreteFunction parse_unary_operand(std::string_view text, const Alphabet& alpha) {
  if (text.rfind("conv(", 0) == 0 && text.size() > 6 && text.back() == ')') {
    return converse(parse_unary(text.substr(5, text.size() - 6), alpha));
  }
  return parse_unary(text, alpha);
}

/// Applies one op to the working set. SUM folds the set into one table.
std::vector<DiscreteFunction> apply_op(std::vector<DiscreteFunction> tables, const std::string& op) {
  if (op == "SUM") return {superpose(tables)};
  std::vector<DiscreteFunction> out;
  for (const auto& f : tables) {
    if (!op.empty() && (op[0] == 'C' || op[0] == '(')) {
      out.push_back(commute(f, RolePermutation::parse(op)));
    } else if (op.rfind("FALSE@", 0) == 0) {
      const auto k = detail::parse_count(std::string_view(op).substr(6));
      if (!k) throw parse_error("bad position in '" + op + "'", 1, 7);
      out.push_back(add_false_variable(f, *k));
    } else if (op.size() > 3 && op[0] == 'T' && op.find(':') != std::string::npos) {
      const auto colon = op.find(':');
      const auto k = detail::parse_count(std::string_view(op).substr(1, colon - 1));
      if (!k) throw parse_error("bad tension slot in '" + op + "'", 1, 2);
      const auto b = parse_unary_operand(std::string_view(op).substr(colon + 1), f.alphabet());
      out.push_back(*k == 0 ? tension_result(f, b) : tension_arg(f, *k, b));
    } else {
      throw parse_error("unknown op '" + op + "'", 1, 1);
    }
  }
  return out;
}

void emit(std::ostream& out, Outputs& files, const std::optional<std::string>& path, std::string content) {
  if (path) {
    files.add(*path, std::move(content));
  } else {
    out << content;
  }
}

std::string summary_json(const LawReport& report, const LawOptions& opt) {
  nlohmann::ordered_json j;
  j["seed"] = opt.seed;
  j["samples"] = opt.samples;
  j["pair_samples"] = opt.pair_binaries;
  j["passed"] = report.all_passed();
  j["laws"] = nlohmann::ordered_json::array();
  for (const auto& o : report.outcomes) {
    nlohmann::ordered_json entry;
    entry["id"] = o.id;
    entry["entry"] = o.entry;
    entry["status"] = o.passed ? "PASS" : "FAIL";
    entry["cases"] = o.cases;
    if (!o.passed) {
      entry["note"] = o.note;
      auto tables = nlohmann::ordered_json::array();
      for (const auto& t : o.counterexample) tables.push_back(print_table(t));
      entry["counterexample"] = tables;
    }
    j["laws"].push_back(entry);
  }
  return j.dump(2) + "\n";
}

std::vector<LawFamily> law_families(const std::vector<std::string>& checks) {
  static const std::map<std::string, LawFamily> names = {
      {"group", LawFamily::commutation_group},
      {"tension-commute", LawFamily::tension_commutation},
      {"tension-tension", LawFamily::tension_tension},
      {"distribution", LawFamily::distribution},
  };
  std::vector<LawFamily> out;
  for (const auto& c : checks) {
    if (c == "all") return all_law_families();
    out.push_back(names.at(c));
  }
  return out;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-valued discrete functions: decomposition, special operators, equation solving", "dfun"};
  app.require_subcommand(1);
  std::string level = "function";
  auto add_level = [&](CLI::App* sub) {
    sub->add_option("--level", level, "function or operator")->check(CLI::IsMember({"function", "operator"}));
  };

  std::string in_path;
  std::optional<std::string> out_path;
  bool unpruned = false;
  auto* decompose_cmd = app.add_subcommand("decompose", "Trivial decomposition of a table into a formula");
  decompose_cmd->add_option("--in", in_path, "table file")->required();
  decompose_cmd->add_option("--out", out_path, "formula file (default stdout)");
  decompose_cmd->add_flag("--unpruned", unpruned, "keep terms whose cell is exactly 0");
  add_level(decompose_cmd);

  std::vector<std::string> inputs, ops;
  auto* apply_cmd = app.add_subcommand("apply", "Apply special operators to tables");
  apply_cmd->add_option("--in", inputs, "table files")->required();
  apply_cmd->add_option("--op", ops, "C(1,0,2) | Tk:(..) | T0:conv((..)) | FALSE@k | SUM")->required();
  apply_cmd->add_option("--out", out_path, "table file (default stdout)");
  add_level(apply_cmd);

  std::string eq_path;
  std::vector<std::string> binds;
  bool trace = false;
  std::optional<std::string> out_dir;
  auto* solve_cmd = app.add_subcommand("solve", "Solve an equation for its unknown");
  solve_cmd->add_option("--eq", eq_path, "equation file")->required();
  solve_cmd->add_option("--bind", binds, "name=table-file")->required();
  solve_cmd->add_flag("--trace", trace, "also emit every intermediate of the two-branch pipeline");
  solve_cmd->add_option("--out-dir", out_dir, "directory for W.tbl, W.formula and trace tables");
  add_level(solve_cmd);

  std::vector<std::string> checks{"all"};
  LawOptions law_opt;
  std::optional<std::string> summary_path;
  auto* laws_cmd = app.add_subcommand("laws", "Check the composition laws of the special operators");
  laws_cmd->add_option("--check", checks, "all | group | tension-commute | tension-tension | distribution")
      ->check(CLI::IsMember({"all", "group", "tension-commute", "tension-tension", "distribution"}));
  laws_cmd->add_option("--samples", law_opt.samples, "functions per entry")->check(CLI::PositiveNumber);
  laws_cmd->add_option("--pair-samples", law_opt.pair_binaries, "binaries per entry for unary-pair laws")
      ->check(CLI::PositiveNumber);
  laws_cmd->add_option("--seed", law_opt.seed, "random seed");
  laws_cmd->add_option("--out", out_path, "report file (default stdout)");
  laws_cmd->add_option("--summary", summary_path, "JSON summary with counterexample tables");

  auto* show_cmd = app.add_subcommand("show", "Pretty-print a table or formula");
  show_cmd->add_option("--in", in_path, "table or formula file")->required();
  add_level(show_cmd);

  app.add_subcommand("lift", "Run another command at operator level: lift <command> ...");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_usage;
  }

  Outputs files;
  if (*decompose_cmd) {
    const auto f = load_table(in_path, level);
    const auto formula = render(trivial_decompose(f), unpruned ? Pruning::unpruned : Pruning::pruned);
    emit(out, files, out_path, print_formula(formula));
  } else if (*apply_cmd) {
    std::vector<DiscreteFunction> tables;
    for (const auto& p : inputs) tables.push_back(load_table(p, level));
    for (const auto& op : ops) tables = apply_op(std::move(tables), op);
    if (tables.size() != 1) {
      throw usage_error("apply ends with " + std::to_string(tables.size()) + " tables; finish with SUM");
    }
    emit(out, files, out_path, print_table(tables.front().named("")));
  } else if (*solve_cmd) {
    Bindings bindings;
    for (const auto& b : binds) {
      const auto eq = b.find('=');
      if (eq == std::string::npos || eq == 0) throw usage_error("--bind expects name=file, got '" + b + "'");
      bindings.insert_or_assign(b.substr(0, eq), load_table(b.substr(eq + 1), level));
    }
    const auto equation = parse_equation(read_file(eq_path), bindings);
    const auto solution = semantic_solve(equation);
    const auto formula = render(trivial_decompose(solution));
    auto put = [&](const std::string& name, const std::string& content) {
      if (out_dir) {
        files.add((fs::path(*out_dir) / name).string(), content);
      } else {
        out << "== " << name << '\n' << content << '\n';
      }
    };

    if (trace) {
      if (!match_two_branch(equation) || equation.alphabet().size() != 3) {
        throw validation_error("--trace needs a two-branch equation over a 3-symbol alphabet");
      }
      const auto run = two_branch_pipeline(equation);
      put("step1.formula", print_formula(render(run.decomposition)));
      for (std::size_t i = 0; i < run.terms.size(); ++i) {
        const auto n = std::to_string(i + 1);
        const auto& t = run.terms[i];
        put("step2_first_" + n + ".tbl", print_table(t.first_branch.named("step2_first_" + n)));
        put("step2_second_" + n + ".tbl", print_table(t.second_branch.named("step2_second_" + n)));
        put("theta" + n + ".tbl", print_table(t.combined.named("theta" + n)));
        put("step4_" + n + ".tbl", print_table(t.valued.named("step4_" + n)));
      }
      // the sum is numbered after the last term, theta7 for six terms
      const auto sum_name = "theta" + std::to_string(run.terms.size() + 1);
      put(sum_name + ".tbl", print_table(run.summed.named(sum_name)));
      put("step6.tbl", print_table(run.solution.named("step6")));
      if (!(run.solution == solution)) {
        std::size_t differ = 0;
        for (std::size_t i = 0; i < solution.size(); ++i) differ += solution.cell(i) == run.solution.cell(i) ? 0 : 1;
        err << "warning: the operator pipeline differs from direct substitution at " << differ << " of "
            << solution.size() << " cells; W.tbl holds the substitution result\n";
      }
    }
    put("W.tbl", print_table(solution));
    put("W.formula", print_formula(formula));
  } else if (*laws_cmd) {
    const auto report = run_laws(law_families(checks), law_opt);
    emit(out, files, out_path, report.text());
    if (summary_path) files.add(*summary_path, summary_json(report, law_opt));
    files.commit();
    return report.all_passed() ? exit_ok : exit_law_failure;
  } else if (*show_cmd) {
    const auto text = read_file(in_path);
    const auto first = text.substr(0, text.find_first_of(" \n"));
    if (first == "formula") {
      out << print_formula(parse_formula(text, level_alphabet(level)));
    } else {
      out << show_table(parse_table(text, level_alphabet(level)));
    }
  } else {
    err << "usage: lift <decompose|apply|solve|show> [options]\n";
    return exit_usage;
  }
  files.commit();
  return exit_ok;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    if (!args.empty() && args.front() == "lift") {
      if (args.size() < 2 || args[1] == "lift" || args[1] == "laws") {
        err << "usage: lift <decompose|apply|solve|show> [options]\n";
        return exit_usage;
      }
      std::vector<std::string> rest(args.begin() + 1, args.end());
      rest.insert(rest.begin() + 1, {"--level", "operator"});
      return dispatch(rest, out, err);
    }
    return dispatch(args, out, err);
  } catch (const validation_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_validation;
  } catch (const parse_error& e) {
    err << "parse error: " << e.what() << '\n';
    return exit_usage;
  } catch (const usage_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }
}

}  // namespace dfun
