#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace stochwave::csv {

/// 17 significant digits, "%.17g"; enough to round-trip any double.
std::string format(double x);
/// Empty cell for an absent value.
std::string format(const std::optional<double>& x);
std::string format(bool b);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string str() const;
};

Table parse(const std::string& text);
Table read(const std::filesystem::path& file);

/// Parses every floating-point cell and re-serializes it with `format`;
/// unsigned integers and non-numeric cells are kept verbatim.
Table reformat(const Table& t);

/// Collects output files and publishes them together: each file is written
/// next to its target under a temporary name and renamed only by commit().
/// Uncommitted temporaries are removed on destruction.
class OutputSet {
 public:
  explicit OutputSet(std::filesystem::path directory);
  ~OutputSet();
  OutputSet(const OutputSet&) = delete;
  OutputSet& operator=(const OutputSet&) = delete;

  void add(const std::string& name, const std::string& contents);
  std::vector<std::filesystem::path> commit();

 private:
  std::filesystem::path dir_;
  std::vector<std::pair<std::filesystem::path, std::filesystem::path>> staged_;
  bool committed_ = false;
};

}  // namespace stochwave::csv
