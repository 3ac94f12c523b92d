#include "pdmp/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pdmp/errors.hpp"

namespace pdmp {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "' for reading");
  return in;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& text, const std::string& file, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ParseError(file, line, "not a number: '" + text + "'");
  if (!std::isfinite(v)) throw ParseError(file, line, "non-finite number: '" + text + "'");
  return v;
}

template <class Int>
Int parse_int(const std::string& text, const std::string& file, std::size_t line) {
  Int v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ParseError(file, line, "not an integer: '" + text + "'");
  return v;
}

// Splits "# key=value" into its parts; nullopt for other comments.
std::optional<std::pair<std::string, std::string>> comment_pair(const std::string& line) {
  const std::string body = trim(line.substr(1));
  const auto eq = body.find('=');
  if (eq == std::string::npos) return std::nullopt;
  return std::pair{trim(body.substr(0, eq)), trim(body.substr(eq + 1))};
}

}  // namespace

void write_trajectory(const Trajectory& traj, const std::string& path) {
  if (traj.records.empty()) throw ConfigError("cannot write an empty trajectory");
  const std::size_t dim = traj.records.front().z.size();
  std::ofstream out = open_out(path);
  out << "# seed=" << traj.seed << '\n';
  out << "i";
  for (std::size_t d = 1; d <= dim; ++d) out << ",z" << d;
  out << ",s,forced\n";
  for (std::size_t i = 0; i < traj.records.size(); ++i) {
    const auto& r = traj.records[i];
    if (r.z.size() != dim) throw ConfigError("trajectory records differ in dimension");
    out << i;
    for (double c : r.z) out << ',' << format_double(c);
    out << ',' << format_double(r.s) << ',' << (r.forced ? 1 : 0) << '\n';
  }
  if (!out) throw ConfigError("write to '" + path + "' failed");
}

Trajectory read_trajectory(const std::string& path) {
  std::ifstream in = open_in(path);
  Trajectory traj;
  std::string line;
  std::size_t line_no = 0;
  std::size_t dim = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    if (line[0] == '#') {
      if (have_header) throw ParseError(path, line_no, "comment after the header");
      if (auto kv = comment_pair(line); kv && kv->first == "seed")
        traj.seed = parse_int<std::uint64_t>(kv->second, path, line_no);
      continue;
    }
    const auto fields = split_commas(line);
    if (!have_header) {
      if (fields.size() < 4 || fields.front() != "i" || fields[fields.size() - 2] != "s" ||
          fields.back() != "forced")
        throw ParseError(path, line_no, "expected header i,z1,...,zd,s,forced");
      dim = fields.size() - 3;
      for (std::size_t d = 0; d < dim; ++d)
        if (fields[1 + d] != "z" + std::to_string(d + 1))
          throw ParseError(path, line_no, "unexpected column '" + fields[1 + d] + "'");
      have_header = true;
      continue;
    }
    if (fields.size() != dim + 3)
      throw ParseError(path, line_no,
                       "expected " + std::to_string(dim + 3) + " columns, found " +
                           std::to_string(fields.size()));
    const auto index = parse_int<std::size_t>(fields[0], path, line_no);
    if (index != traj.records.size())
      throw ParseError(path, line_no, "record index " + fields[0] + " out of sequence");
    TrajectoryRecord r;
    r.z.resize(dim);
    for (std::size_t d = 0; d < dim; ++d) r.z[d] = parse_double(fields[1 + d], path, line_no);
    r.s = parse_double(fields[dim + 1], path, line_no);
    const std::string& flag = fields[dim + 2];
    if (flag != "0" && flag != "1") throw ParseError(path, line_no, "forced must be 0 or 1");
    r.forced = flag == "1";
    if (index == 0 && (r.s != 0.0 || r.forced))
      throw ParseError(path, line_no, "record 0 must have s = 0 and forced = 0");
    traj.records.push_back(std::move(r));
  }
  line_no = std::max<std::size_t>(line_no, 1);
  if (!have_header) throw ParseError(path, line_no, "missing header");
  if (traj.records.empty()) throw ParseError(path, line_no, "empty trajectory: record 0 is required");
  return traj;
}

void write_estimate(const DensityEstimate& estimate, const std::string& path,
                    std::span<const double> truth) {
  if (!truth.empty() && truth.size() != estimate.grid.size())
    throw ConfigError("truth column must match the grid");
  std::ofstream out = open_out(path);
  const auto& m = estimate.meta;
  out << "# region=" << m.region_label << '\n'
      << "# seed=" << m.seed << '\n'
      << "# transitions=" << m.transitions << '\n'
      << "# visits=" << m.visits << '\n'
      << "# horizon=" << format_double(m.horizon_t) << '\n';
  for (const auto& c : m.cells) {
    out << "# cell=" << c.label << ";matched=" << c.matched
        << ";bandwidth=" << (c.bandwidth ? format_double(*c.bandwidth) : std::string("none")) << '\n';
  }
  out << (truth.empty() ? "s,f_hat\n" : "s,f_hat,f_true\n");
  for (std::size_t j = 0; j < estimate.grid.size(); ++j) {
    out << format_double(estimate.grid[j]) << ',' << format_double(estimate.values[j]);
    if (!truth.empty()) out << ',' << format_double(truth[j]);
    out << '\n';
  }
  if (!out) throw ConfigError("write to '" + path + "' failed");
}

EstimateTable read_estimate(const std::string& path) {
  std::ifstream in = open_in(path);
  EstimateTable table;
  std::string line;
  std::size_t line_no = 0;
  std::size_t columns = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    if (line[0] == '#') {
      if (auto kv = comment_pair(line)) {
        // Several "cell" lines are kept as one ';'-joined entry per index.
        std::string key = kv->first;
        if (key == "cell") {
          std::size_t k = 0;
          while (table.meta.count("cell" + std::to_string(k))) ++k;
          key += std::to_string(k);
        }
        table.meta[key] = kv->second;
      }
      continue;
    }
    const auto fields = split_commas(line);
    if (columns == 0) {
      if (fields == std::vector<std::string>{"s", "f_hat"}) columns = 2;
      else if (fields == std::vector<std::string>{"s", "f_hat", "f_true"}) columns = 3;
      else throw ParseError(path, line_no, "expected header s,f_hat[,f_true]");
      continue;
    }
    if (fields.size() != columns)
      throw ParseError(path, line_no, "expected " + std::to_string(columns) + " columns");
    table.s.push_back(parse_double(fields[0], path, line_no));
    table.f_hat.push_back(parse_double(fields[1], path, line_no));
    if (columns == 3) table.f_true.push_back(parse_double(fields[2], path, line_no));
  }
  if (columns == 0) throw ParseError(path, line_no, "missing header");
  return table;
}

void write_plot_data(const DensityEstimate& estimate, const std::string& path,
                     std::span<const double> truth) {
  if (!truth.empty() && truth.size() != estimate.grid.size())
    throw ConfigError("truth column must match the grid");
  std::ofstream out = open_out(path);
  out << (truth.empty() ? "# s f_hat\n" : "# s f_hat f_true\n");
  for (std::size_t j = 0; j < estimate.grid.size(); ++j) {
    out << format_double(estimate.grid[j]) << ' ' << format_double(estimate.values[j]);
    if (!truth.empty()) out << ' ' << format_double(truth[j]);
    out << '\n';
  }
}

std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in = open_in(path);
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(path, line_no, "expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(path, line_no, "empty key");
    if (!out.emplace(key, value).second) throw ParseError(path, line_no, "duplicate key '" + key + "'");
  }
  return out;
}

}  // namespace pdmp
