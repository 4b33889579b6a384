#include <iostream>

#include "CLI11.hpp"
#include "tmodel/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Exact computations for t-model structures on chain complexes and their towers"};
  tmodel::CliOptions opt;
  std::string workspace, command;
  std::vector<std::string> args;
  std::size_t budget_filler = 0, budget_reindex = 0;
  int degree = 0;

  app.add_option("command", command, "Subcommand")->required()->check(CLI::IsMember(tmodel::command_names()));
  app.add_option("args", args, "Object names and integer parameters");
  app.add_option("--workspace", workspace, "Workspace file (JSON)");
  app.add_option("--out", opt.out_dir, "Output directory")->capture_default_str();
  auto* bf = app.add_option("--budget-filler", budget_filler, "Filler search depth for pro-isomorphisms");
  auto* br = app.add_option("--budget-reindex", budget_reindex, "Reindexing search depth");
  auto* dg = app.add_option("--degree", degree, "Restrict to a single degree");
  app.add_option("--seed", opt.seed, "Seed for generator-based self tests")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? tmodel::kExitOk : tmodel::kExitError;
  }
  if (*bf) opt.budget_filler = budget_filler;
  if (*br) opt.budget_reindex = budget_reindex;
  if (*dg) opt.degree = degree;

  try {
    tmodel::Workspace ws;
    if (!workspace.empty()) {
      ws = tmodel::parse_workspace(workspace);
    } else if (command != "selftest") {
      throw tmodel::MissingArgument("--workspace");
    }
    return tmodel::run_command(ws, command, args, opt, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return tmodel::kExitError;
  }
}
