#include <CLI11.hpp>
#include <exception>
#include <iostream>
#include <string>

#include "lrsplit/errors.hpp"
#include "lrsplit/experiment.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  std::string out_dir = "out";
  int threads = 1;
};

void add_common(CLI::App* cmd, CommonOptions& opts, bool config_required) {
  auto* c = cmd->add_option("--config", opts.config_path, "experiment config file");
  if (config_required) c->required();
  cmd->add_option("--out", opts.out_dir, "output directory")->capture_default_str();
  cmd->add_option("--threads", opts.threads, "worker threads for sweep points")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lrsplit: low-rank splitting integrators for stiff matrix differential equations"};
  app.require_subcommand(1);

  CommonOptions conv, sing, deco, plot;
  std::string plot_csv;

  CLI::App* c_conv =
      app.add_subcommand("convergence", "error sweep over schemes, ranks and step sizes");
  add_common(c_conv, conv, true);

  CLI::App* c_sing = app.add_subcommand(
      "singvals", "singular-value spectrum and effective rank of the reference solution");
  add_common(c_sing, sing, true);

  CLI::App* c_deco =
      app.add_subcommand("decompose", "three-way error decomposition over the step sizes");
  add_common(c_deco, deco, true);

  CLI::App* c_plot = app.add_subcommand("plots", "emit gnuplot scripts for produced CSV files");
  add_common(c_plot, plot, false);
  c_plot->add_option("--csv", plot_csv, "plot a single CSV file instead of scanning --out");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_conv->parsed())
      return lrsplit::cmd_convergence(lrsplit::parse_config_file(conv.config_path),
                                      conv.out_dir, conv.threads);
    if (c_sing->parsed())
      return lrsplit::cmd_singular_values(lrsplit::parse_config_file(sing.config_path),
                                          sing.out_dir, sing.threads);
    if (c_deco->parsed())
      return lrsplit::cmd_decompose(lrsplit::parse_config_file(deco.config_path), deco.out_dir,
                                    deco.threads);
    if (c_plot->parsed()) return lrsplit::cmd_emit_plots(plot_csv, plot.out_dir);
  } catch (const lrsplit::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const lrsplit::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const lrsplit::DimensionMismatch& e) {
    std::cerr << "dimension mismatch: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
