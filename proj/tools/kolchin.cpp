// kolchin: command-line front end.
//
//   kolchin check FILE
//   kolchin upg FILE [--map M]
//   kolchin abelian FILE [--group K]
//   kolchin condition FILE [--group K]
//   kolchin axes FILE [--group K] [--search-bound N]
//   kolchin embed FILE [--group K] --words w1,w2,...
//   kolchin il FILE [--group K] --element w [--axis A] [--exp-bound B] [--radius R] [--depth D]
//   kolchin bound --rank n
//
// Words are generator labels joined by '.', with '~' or '\'' for inverses
// and an optional ^k: "D.~E^2" is D o E^-2 (the leftmost factor is applied
// last).

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "kolchin/io/commands.hpp"

namespace {

using kolchin::io::Outcome;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw kolchin::DomainError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::optional<std::string> opt(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Filtered graph maps, twist coordinates and interesting lifts"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "text";
  long long seed = 0;
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--seed", seed, "Reserved; nothing is randomized");

  std::string file;
  std::string group;
  std::string map;
  std::string words;
  std::string element;
  std::string axis;
  int search_bound = 8;
  int check_length = 6;
  int exp_bound = 5;
  int radius = 6;
  int depth = kolchin::kDefaultDepth;
  int rank = 2;

  auto* check = app.add_subcommand("check", "Validate a document and smoke-test the group laws");
  check->add_option("file", file)->required();

  auto* upg = app.add_subcommand("upg", "Homology actions, unipotence, mod-3 triviality and growth");
  upg->add_option("file", file)->required();
  upg->add_option("--map", map);

  auto* abelian = app.add_subcommand("abelian", "Commutation certificate for a group");
  abelian->add_option("file", file)->required();
  abelian->add_option("--group", group);

  auto* cond = app.add_subcommand("condition", "Normalize a group's graph");
  cond->add_option("file", file)->required();
  cond->add_option("--group", group);
  cond->add_option("--check-length", check_length, "Outer-class check length (0 disables)");

  auto* axes = app.add_subcommand("axes", "Essential edges, axes and Property A");
  axes->add_option("file", file)->required();
  axes->add_option("--group", group);
  axes->add_option("--search-bound", search_bound);
  axes->add_option("--check-length", check_length);

  auto* embed = app.add_subcommand("embed", "Twist coordinates of words");
  embed->add_option("file", file)->required();
  embed->add_option("--group", group);
  embed->add_option("--words", words)->required();
  embed->add_option("--search-bound", search_bound);
  embed->add_option("--check-length", check_length);

  auto* il = app.add_subcommand("il", "Interesting lifts along an axis");
  il->add_option("file", file)->required();
  il->add_option("--group", group);
  il->add_option("--element", element)->required();
  il->add_option("--axis", axis);
  il->add_option("--exp-bound", exp_bound);
  il->add_option("--radius", radius);
  il->add_option("--depth", depth);
  il->add_option("--search-bound", search_bound);
  il->add_option("--check-length", check_length);

  auto* bound = app.add_subcommand("bound", "Index-bound arithmetic");
  bound->add_option("--rank", rank)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kolchin::io::kInvalid;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  const Outcome out = kolchin::io::guarded(command, [&]() -> Outcome {
    if (bound->parsed()) return kolchin::io::cmd_bound(rank);
    const auto doc = kolchin::io::parse(read_file(file));
    if (check->parsed()) return kolchin::io::cmd_check(doc);
    if (upg->parsed()) return kolchin::io::cmd_upg(doc, opt(map));
    if (abelian->parsed()) return kolchin::io::cmd_abelian(doc, opt(group));
    if (cond->parsed()) return kolchin::io::cmd_condition(doc, opt(group), check_length);
    if (axes->parsed()) return kolchin::io::cmd_axes(doc, opt(group), search_bound, check_length);
    if (embed->parsed()) {
      return kolchin::io::cmd_embed(doc, opt(group), kolchin::io::split_list(words), search_bound, check_length);
    }
    return kolchin::io::cmd_il(doc, opt(group), element, opt(axis), exp_bound, radius, depth, search_bound, check_length);
  });

  if (format == "json") {
    std::cout << out.report.dump(2) << '\n';
  } else if (out.report.value("status", "") == "error") {
    std::cerr << "kolchin " << command << ": " << out.report["error"]["message"].get<std::string>() << '\n';
  } else {
    std::cout << kolchin::io::render_text(out.report);
  }
  return out.exit_code;
}
