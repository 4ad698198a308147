#include <iostream>

#include <CLI11.hpp>

#include "kppfront/cli.hpp"
#include "kppfront/error.hpp"
#include "kppfront/io.hpp"

int main(int argc, char** argv) {
  using namespace kppfront;
  CLI::App app{"Traveling-front scenario runner for predator-prey reaction-diffusion models"};
  std::string config;
  std::string out;
  std::string format = "both";
  RunOptions opt;
  app.add_option("--config", config, "scenario file")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out, "output root (default: $KPPFRONT_OUT or ./kppfront_out)");
  app.add_option("--format", format, "data files to write")
      ->check(CLI::IsMember({"csv", "json", "both"}))
      ->capture_default_str();
  app.add_flag("--plot-data", opt.plot_data, "also write whitespace-delimited .dat files for gnuplot");
  app.add_option("--jobs", opt.jobs, "scenarios run in parallel")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--seed", opt.seed, "seed for random sampling")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  opt.out = out.empty() ? cli::default_output_root() : std::filesystem::path(out);
  opt.format = format == "csv" ? OutputFormat::Csv : format == "json" ? OutputFormat::Json : OutputFormat::Both;
  std::vector<Scenario> scenarios;
  try {
    scenarios = cli::parse_config(io::read_file(config));
  } catch (const Error& e) {
    std::cerr << config << ": " << e.what() << '\n';
    return 2;
  }
  try {
    return cli::run(scenarios, opt, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
