#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "lrsplit/errors.hpp"
#include "lrsplit/experiment.hpp"

namespace lrsplit {

namespace {

namespace fs = std::filesystem;

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  long column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<long>(it - header.begin());
  }
};

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("plots: cannot open '" + path + "'");
  CsvTable table;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (table.header.empty())
      table.header = std::move(fields);
    else
      table.rows.push_back(std::move(fields));
  }
  if (table.header.empty()) throw ConfigError("plots: '" + path + "' has no header row");
  return table;
}

void require_columns(const CsvTable& table, const std::vector<std::string>& needed,
                     const std::string& schema) {
  for (const std::string& col : needed) {
    if (table.column(col) < 0)
      throw ConfigError("plots: CSV header is missing column '" + col + "' required by the '" +
                        schema + "' schema");
  }
}

std::string relative_to(const std::string& csv_path, const std::string& out_dir) {
  std::error_code ec;
  const fs::path rel = fs::relative(csv_path, out_dir, ec);
  if (ec || rel.empty()) return fs::path(csv_path).filename().string();
  return rel.string();
}

std::string script_path(const std::string& csv_path, const std::string& out_dir) {
  const std::string stem = fs::path(csv_path).stem().string();
  return (fs::path(out_dir) / (stem + ".gp")).string();
}

void emit_convergence(const CsvTable& table, const std::string& csv_path,
                      const std::string& out_dir) {
  require_columns(table, {"scheme", "rank", "tau", "error_frobenius"}, "convergence");
  const long c_scheme = table.column("scheme") + 1;
  const long c_rank = table.column("rank") + 1;
  const long c_tau = table.column("tau") + 1;
  const long c_err = table.column("error_frobenius") + 1;

  std::vector<std::pair<std::string, std::string>> groups;  // (scheme, rank)
  for (const auto& row : table.rows) {
    const std::pair<std::string, std::string> g{row[c_scheme - 1], row[c_rank - 1]};
    if (std::find(groups.begin(), groups.end(), g) == groups.end()) groups.push_back(g);
  }

  std::ofstream out(script_path(csv_path, out_dir));
  const std::string rel = relative_to(csv_path, out_dir);
  out << "# gnuplot script generated by lrsplit\n";
  out << "set datafile separator \",\"\n";
  out << "set logscale xy\n";
  out << "set xlabel \"step size tau\"\n";
  out << "set ylabel \"Frobenius error\"\n";
  out << "set key outside right\n";
  out << "plot \\\n";
  for (std::size_t i = 0; i < groups.size(); ++i) {
    out << "  \"" << rel << "\" using " << c_tau << ":((strcol(" << c_scheme << ") eq \""
        << groups[i].first << "\") && (strcol(" << c_rank << ") eq \"" << groups[i].second
        << "\") ? column(" << c_err << ") : NaN) with linespoints title \""
        << groups[i].first << " r=" << groups[i].second << "\"";
    out << (i + 1 < groups.size() ? ", \\\n" : "\n");
  }
}

void emit_decompose(const CsvTable& table, const std::string& csv_path,
                    const std::string& out_dir) {
  require_columns(table, {"tau", "E_sp", "E_delta", "E_lr", "total"}, "decompose");
  std::ofstream out(script_path(csv_path, out_dir));
  const std::string rel = relative_to(csv_path, out_dir);
  out << "# gnuplot script generated by lrsplit\n";
  out << "set datafile separator \",\"\n";
  out << "set logscale xy\n";
  out << "set xlabel \"step size tau\"\n";
  out << "set ylabel \"Frobenius error\"\n";
  out << "set key outside right\n";
  out << "plot \\\n";
  const char* names[] = {"E_sp", "E_delta", "E_lr", "total"};
  for (int i = 0; i < 4; ++i) {
    out << "  \"" << rel << "\" using " << (table.column("tau") + 1) << ":"
        << (table.column(names[i]) + 1) << " with linespoints title \"" << names[i] << "\"";
    out << (i < 3 ? ", \\\n" : "\n");
  }
}

void emit_spectrum(const CsvTable& table, const std::string& csv_path,
                   const std::string& out_dir) {
  require_columns(table, {"k", "sigma"}, "singvals_spectrum");
  std::ofstream out(script_path(csv_path, out_dir));
  out << "# gnuplot script generated by lrsplit\n";
  out << "set datafile separator \",\"\n";
  out << "set logscale y\n";
  out << "set xlabel \"index k\"\n";
  out << "set ylabel \"sigma_k\"\n";
  out << "plot \"" << relative_to(csv_path, out_dir) << "\" using "
      << (table.column("k") + 1) << ":" << (table.column("sigma") + 1)
      << " with points pt 7 title \"singular values\"\n";
}

void emit_rank(const CsvTable& table, const std::string& csv_path, const std::string& out_dir) {
  require_columns(table, {"t", "effective_rank"}, "singvals_rank");
  std::ofstream out(script_path(csv_path, out_dir));
  out << "# gnuplot script generated by lrsplit\n";
  out << "set datafile separator \",\"\n";
  out << "set xlabel \"t\"\n";
  out << "set ylabel \"effective rank\"\n";
  out << "plot \"" << relative_to(csv_path, out_dir) << "\" using "
      << (table.column("t") + 1) << ":" << (table.column("effective_rank") + 1)
      << " with steps title \"rank of the reference solution\"\n";
}

void emit_for(const std::string& csv_path, const std::string& out_dir) {
  const CsvTable table = read_csv(csv_path);
  if (table.column("error_frobenius") >= 0)
    emit_convergence(table, csv_path, out_dir);
  else if (table.column("E_sp") >= 0)
    emit_decompose(table, csv_path, out_dir);
  else if (table.column("sigma") >= 0)
    emit_spectrum(table, csv_path, out_dir);
  else if (table.column("effective_rank") >= 0)
    emit_rank(table, csv_path, out_dir);
  else
    throw ConfigError(
        "plots: CSV header is missing column 'error_frobenius', 'E_sp', 'sigma' or "
        "'effective_rank'; not a known schema");
}

}  // namespace

int cmd_emit_plots(const std::string& csv_path, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  if (!csv_path.empty()) {
    emit_for(csv_path, out_dir);
    return 0;
  }
  bool found = false;
  for (const char* name :
       {"convergence.csv", "decompose.csv", "singvals_spectrum.csv", "singvals_rank.csv"}) {
    const fs::path candidate = fs::path(out_dir) / name;
    if (fs::exists(candidate)) {
      emit_for(candidate.string(), out_dir);
      found = true;
    }
  }
  if (!found)
    throw ConfigError("plots: no known CSV files in '" + out_dir +
                      "'; pass --csv or run a sweep first");
  return 0;
}

}  // namespace lrsplit
