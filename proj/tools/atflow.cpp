#include "atflow/reporting.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

std::string eps_dir_name(double eps) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "eps_%g", eps);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unilateral gradient flow of the Ambrosio-Tortorelli energy"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<double> eps_list;

  CLI::App* cmd_validate =
      app.add_subcommand("validate", "Parse and validate a config, then exit");
  cmd_validate->add_option("config", config_path, "config file")->required();

  CLI::App* cmd_run = app.add_subcommand("run", "Run a flow and write its trace");
  cmd_run->add_option("config", config_path, "config file")->required();

  CLI::App* cmd_sweep =
      app.add_subcommand("sweep", "Run the flow per epsilon and write a sweep report");
  cmd_sweep->add_option("config", config_path, "config file")->required();
  cmd_sweep->add_option("--eps", eps_list, "strictly decreasing epsilon values")
      ->required()
      ->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_validate->parsed()) {
      atflow::parse_config_file(config_path);
      std::cout << "config ok\n";
      return 0;
    }

    if (cmd_run->parsed()) {
      const atflow::RunConfig cfg = atflow::parse_config_file(config_path);
      try {
        const atflow::Trace trace = atflow::run_flow(cfg);
        atflow::write_trace(trace, cfg, cfg.out_dir);
        std::cout << "wrote " << cfg.out_dir << "/energies.csv ("
                  << trace.records.size() << " steps)\n";
        return 0;
      } catch (const atflow::FlowError& err) {
        atflow::write_trace(err.trace, cfg, cfg.out_dir);
        std::cerr << "error: " << err.what() << " (partial trace written to "
                  << cfg.out_dir << ")\n";
        return 1;
      }
    }

    if (cmd_sweep->parsed()) {
      const atflow::RunConfig cfg = atflow::parse_config_file(config_path);
      const atflow::SweepReport report = atflow::eps_sweep(
          cfg, eps_list, [&](double eps, const atflow::Trace& trace) {
            atflow::RunConfig sub = cfg;
            sub.epsilon = eps;
            sub.out_dir = cfg.out_dir + "/" + eps_dir_name(eps);
            atflow::write_trace(trace, sub, sub.out_dir);
          });
      atflow::write_sweep_report(report, cfg.out_dir);
      std::cout << "wrote " << cfg.out_dir << "/sweep_report.csv ("
                << report.entries.size() << " epsilon values)\n";
      return 0;
    }
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
