#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "uhf/cli.hpp"

namespace {

bool write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  return static_cast<bool>(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Product type actions on UHF algebras"};
  app.require_subcommand(1);
  std::string document, output, plan;
  std::vector<std::string> sets;
  for (const auto& name : uhf::cli_commands()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("document", document, "Action-spec document")->required();
    sub->add_option("-o,--output", output, "CSV output path (default: stdout)");
    sub->add_option("-p,--plan", plan, "Replay plan JSON output path");
    sub->add_option("-s,--set", sets, "Task parameter override key=value");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : uhf::kExitInput;
  }

  uhf::RunOptions options;
  options.command = app.get_subcommands().front()->get_name();
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::cerr << "error: --set expects key=value, got '" << s << "'\n";
      return uhf::kExitInput;
    }
    options.overrides[s.substr(0, eq)] = s.substr(eq + 1);
  }

  std::ifstream in(document, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read " << document << "\n";
    return uhf::kExitInput;
  }
  std::stringstream text;
  text << in.rdbuf();

  const auto parsed = [&]() -> std::optional<uhf::ActionSpecDocument> {
    try {
      return uhf::ActionSpecDocument::parse(text.str());
    } catch (const uhf::Error& e) {
      std::cerr << document << ": " << e.what() << "\n";
      return std::nullopt;
    }
  }();
  if (!parsed) return uhf::kExitInput;
  for (const auto& t : parsed->tasks) {
    if (t.get("kind", "") != options.command) continue;
    if (output.empty()) output = t.get("output", "");
    if (plan.empty()) plan = t.get("plan", "");
    break;
  }

  const auto result = uhf::run_command(*parsed, options);
  if (result.exit_code == uhf::kExitInput) {
    std::cerr << document << ": " << result.report;
    return result.exit_code;
  }
  std::cerr << result.report;
  if (output.empty()) {
    std::cout << result.csv;
  } else if (!write_file(output, result.csv)) {
    std::cerr << "error: cannot write " << output << "\n";
    return uhf::kExitInput;
  }
  if (!plan.empty() && result.plan && !write_file(plan, *result.plan)) {
    std::cerr << "error: cannot write " << plan << "\n";
    return uhf::kExitInput;
  }
  return result.exit_code;
}
