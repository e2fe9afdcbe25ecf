#include "manna/app/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "manna/app/commands.hpp"
#include "manna/io/demos.hpp"

namespace manna::app {
namespace {

int exit_code(int status) {
  switch (status) {
    case 200: return kExitOk;
    case 400:
    case 422: return kExitInput;
    default: return kExitCompute;
  }
}

std::string read_document(const std::string& path, std::istream& in) {
  if (path == "-") return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  std::ifstream file(path, std::ios::binary);
  if (!file) throw InputError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << file.rdbuf();
  return ss.str();
}

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw io::SchemaError("", std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Competitive division of a mixed manna under additive utilities", "manna"};
  app.require_subcommand(1);

  bool as_json = false, exact = false;
  std::optional<double> tol;
  std::optional<std::size_t> max_supports;
  std::uint64_t seed = 0;
  app.add_flag("--json", as_json, "Emit the JSON report");
  app.add_flag("--exact", exact, "Exact rational arithmetic where available");
  app.add_option("--tol", tol, "KKT tolerance (solve) or golden tolerance (demo)")->check(CLI::PositiveNumber);
  app.add_option("--limit-supports", max_supports, "Cap on enumerated supports")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Seed for randomized steps");

  std::string path;
  std::string rule_name;
  std::size_t trials = 0;
  std::optional<std::size_t> grid;
  auto file_command = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    sub->add_option("problem", path, "Problem JSON file, or - for stdin")->required();
    return sub;
  };
  file_command("classify", "Positive, negative or null, with the margin");
  CLI::App* solve = file_command("solve", "Selected division, KKT residuals and fairness audit");
  file_command("enumerate", "Every competitive profile of a negative problem");
  CLI::App* audit = file_command("audit", "Fairness audit of a rule's selection or a given allocation");
  CLI::App* components = file_command("components", "Components of the efficient envy-free set (two bads)");
  for (CLI::App* sub : {solve, audit})
    sub->add_option("--rule", rule_name, "competitive, egalitarian or equal-split");
  audit->add_option("--trials", trials, "Random draws per axiom; 0 skips the axiom suite");
  components->add_option("--grid", grid, "Also run the grid oracle at this resolution")->check(CLI::Range(2, 400));

  std::string demo_name;
  CLI::App* demo = app.add_subcommand("demo", "Replay a worked instance and check its golden values");
  demo->fallthrough();
  demo->add_option("name", demo_name, "Demo name; omit to list them");

  std::vector<const char*> args;
  for (const std::string& a : argv) args.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(args.size()), args.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  if (demo->parsed()) {
    if (demo_name.empty()) {
      const json catalog = io::demo_catalog();
      if (as_json) {
        out << serialize(catalog);
      } else {
        for (const json& d : catalog) out << d["name"].get<std::string>() << "  " << d["title"].get<std::string>() << "\n";
      }
      return kExitOk;
    }
    io::DemoOptions opts;
    opts.exact = exact;
    if (tol) opts.tolerance = *tol;
    if (max_supports) opts.max_supports = *max_supports;
    opts.seed = seed;
    const CommandResult r = guarded([&] { return io::to_json(io::run_demo(demo_name, opts)); });
    if (r.status != 200) {
      err << "manna: " << r.body["error"]["message"].get<std::string>() << "\n";
      return exit_code(r.status);
    }
    out << (as_json ? serialize(r.body) : render_demo(r.body));
    return r.body["passed"].get<bool>() ? kExitOk : kExitAssertion;
  }

  Command command = Command::Classify;
  for (CLI::App* sub : app.get_subcommands()) command = parse_command(sub->get_name());

  CommandOptions opts;
  opts.exact = exact;
  opts.tol = tol;
  opts.max_supports = max_supports;
  opts.seed = seed;
  opts.trials = trials;
  opts.grid = grid;
  const CommandResult r = guarded([&] {
    if (!rule_name.empty()) opts.rule = parse_rule(rule_name);
    return run_command(command, parse_text(read_document(path, in)), opts);
  });
  if (r.status != 200) {
    const json& e = r.body["error"];
    err << "manna: " << e["message"].get<std::string>() << "\n";
    return exit_code(r.status);
  }
  out << (as_json ? serialize(r.body) : render(command, r.body));
  return kExitOk;
}

}  // namespace manna::app
