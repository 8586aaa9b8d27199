#include "stochwave/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unistd.h>

namespace stochwave::csv {

std::string format(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format(const std::optional<double>& x) { return x ? format(*x) : std::string(); }

std::string format(bool b) { return b ? "1" : "0"; }

std::string Table::str() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

Table parse(const std::string& text) {
  Table t;
  std::stringstream ss(text);
  std::string line;
  if (!std::getline(ss, line)) throw std::runtime_error("csv: empty input");
  t.header = split(line);
  while (std::getline(ss, line)) {
    auto cells = split(line);
    if (cells.size() != t.header.size()) throw std::runtime_error("csv: ragged row");
    t.rows.push_back(std::move(cells));
  }
  return t;
}

Table read(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("csv: cannot open " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

Table reformat(const Table& t) {
  Table out = t;
  for (auto& row : out.rows) {
    for (auto& cell : row) {
      if (cell.empty()) continue;
      // Integers (counts, flags, 64-bit seeds) are kept verbatim; a double
      // cannot hold every seed.
      if (cell.find_first_not_of("0123456789") == std::string::npos) continue;
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end != cell.c_str() + cell.size()) continue;
      cell = format(v);
    }
  }
  return out;
}

OutputSet::OutputSet(std::filesystem::path directory) : dir_(std::move(directory)) {
  std::filesystem::create_directories(dir_);
}

OutputSet::~OutputSet() {
  if (committed_) return;
  std::error_code ec;
  for (const auto& [tmp, target] : staged_) std::filesystem::remove(tmp, ec);
}

void OutputSet::add(const std::string& name, const std::string& contents) {
  const auto target = dir_ / name;
  auto tmp = target;
  tmp += ".tmp" + std::to_string(::getpid());
  std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + tmp.string());
  out << contents;
  out.close();
  if (!out) throw std::runtime_error("failed writing " + tmp.string());
  staged_.emplace_back(tmp, target);
}

std::vector<std::filesystem::path> OutputSet::commit() {
  std::vector<std::filesystem::path> written;
  for (const auto& [tmp, target] : staged_) {
    std::filesystem::rename(tmp, target);
    written.push_back(target);
  }
  committed_ = true;
  return written;
}

}  // namespace stochwave::csv
