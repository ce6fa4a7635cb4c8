#pragma once

#include <string>
#include <vector>

namespace dpg {

// %.17g: shortest text that is stable across runs and round-trips doubles
// closely enough for byte comparison.
std::string format_double(double value);

// Writes to a sibling temporary file and renames it into place, so readers
// never see a partial file.
void write_file_atomic(const std::string& path, const std::string& contents);

std::string read_file(const std::string& path);

// Creates the directory if needed and proves it is writable.
void ensure_writable_dir(const std::string& dir);

// Comma-separated rows with a header line.
class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header);
  CsvWriter& cell(const std::string& text);
  CsvWriter& cell(double value);
  CsvWriter& cell(long long value);
  CsvWriter& cell(int value) { return cell(static_cast<long long>(value)); }
  CsvWriter& cell(bool value) { return cell(static_cast<long long>(value ? 1 : 0)); }
  void end_row();
  const std::string& str() const { return text_; }

 private:
  std::string text_;
  bool row_started_ = false;
};

// Parses a CSV written by CsvWriter (no quoting) into header + rows.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;
};

CsvTable parse_csv(const std::string& text);

}  // namespace dpg
