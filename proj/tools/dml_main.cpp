#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "dml/errors.hpp"
#include "dml/report.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Return sets, recurrences, degrees, heights and densities of polynomial dynamical systems"};
  app.require_subcommand(1);
  std::string file, format = "json";
  std::vector<std::string> overrides;
  for (const char* name : {"orbit", "sml", "interp", "degree", "height", "density"}) {
    auto* sub = app.add_subcommand(name, std::string("run a ") + name + " problem file");
    sub->add_option("file", file, "problem file (JSON)")->required();
    sub->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));
    sub->add_option("--override", overrides, "key=value; bare keys address config");
  }
  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();
  const dml::Format fmt = dml::format_from_string(format);

  dml::Report report;
  std::ifstream in(file, std::ios::binary);
  if (!in) {
    report = dml::error_report(command, "IOError", "cannot read " + file);
  } else {
    std::stringstream buf;
    buf << in.rdbuf();
    try {
      const dml::ProblemFile pf = dml::parse_problem_text(buf.str(), overrides);
      if (dml::to_string(pf.command) != command)
        throw dml::SchemaError("file declares command '" + dml::to_string(pf.command) + "', not '" + command + "'");
      report = dml::run(pf);
    } catch (const dml::ParseError& e) {
      report = dml::error_report(command, "ParseError", e.what(), e.offset());
    } catch (const dml::Error& e) {
      report = dml::error_report(command, "SchemaError", e.what());
    }
  }
  std::cout << dml::emit(report, fmt);
  if (report.status == "ERROR") std::cerr << "dml: " << report.result["error"]["message"].get<std::string>() << "\n";
  return report.exit_code();
}
