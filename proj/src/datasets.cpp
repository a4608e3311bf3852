#include "robavg/datasets.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include "robavg/errors.hpp"

namespace robavg {

namespace {

// Stack-loss rows: response, air flow, cooling water inlet temp, acid conc.
constexpr std::array<std::array<double, 4>, 21> kStackloss = {{
    {42, 80, 27, 89}, {37, 80, 27, 88}, {37, 75, 25, 90}, {28, 62, 24, 87},
    {18, 62, 22, 87}, {18, 62, 23, 87}, {19, 62, 24, 93}, {20, 62, 24, 93},
    {15, 58, 23, 87}, {14, 58, 18, 80}, {14, 58, 18, 89}, {13, 58, 17, 88},
    {11, 58, 18, 82}, {12, 58, 19, 93}, {8, 50, 18, 89},  {7, 50, 18, 86},
    {8, 50, 19, 72},  {8, 50, 19, 79},  {9, 50, 20, 80},  {15, 56, 20, 82},
    {15, 70, 20, 91},
}};

// Hald cement rows: response y, then x1..x4.
constexpr std::array<std::array<double, 5>, 13> kHald = {{
    {78.5, 7, 26, 6, 60},  {74.3, 1, 29, 15, 52}, {104.3, 11, 56, 8, 20},
    {87.6, 11, 31, 8, 47}, {95.9, 7, 52, 6, 33},  {109.2, 11, 55, 9, 22},
    {102.7, 3, 71, 17, 6}, {72.5, 1, 31, 22, 44}, {93.1, 2, 54, 18, 22},
    {115.9, 21, 47, 4, 26}, {83.8, 1, 40, 23, 34}, {113.3, 11, 66, 9, 12},
    {109.4, 10, 68, 8, 12},
}};

template <std::size_t Rows, std::size_t Cols>
Dataset dataset_from(const std::array<std::array<double, Cols>, Rows>& table,
                     std::vector<std::string> predictor_names) {
  Dataset data;
  data.design.resize(Rows, Cols - 1);
  data.response.resize(Rows);
  for (std::size_t i = 0; i < Rows; ++i) {
    data.response[static_cast<Eigen::Index>(i)] = table[i][0];
    for (std::size_t j = 1; j < Cols; ++j)
      data.design(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j - 1)) =
          table[i][j];
  }
  data.column_names = std::move(predictor_names);
  return data;
}

double parse_cell(const std::string& cell, std::size_t row, std::size_t col) {
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
  while (end > begin && (*(end - 1) == ' ' || *(end - 1) == '\t' || *(end - 1) == '\r'))
    --end;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end)
    throw NonNumericCellError("non-numeric cell at row " + std::to_string(row + 1) +
                              ", column " + std::to_string(col + 1) + ": '" + cell +
                              "'");
  return value;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string trimmed(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t'))
    s.pop_back();
  std::size_t start = 0;
  while (start < s.size() && (s[start] == ' ' || s[start] == '\t')) ++start;
  return s.substr(start);
}

}  // namespace

NamedDataset stackloss() {
  NamedDataset out;
  out.name = "stackloss";
  out.data = dataset_from(kStackloss, {"air_flow", "water_temp", "acid_conc"});
  out.response_name = "stack_loss";
  out.outlier_rows = {20};  // observation 21
  out.provenance = "Operation of a plant for the oxidation of ammonia to nitric acid";
  return out;
}

NamedDataset hald_cement() {
  NamedDataset out;
  out.name = "hald";
  out.data = dataset_from(kHald, {"x1", "x2", "x3", "x4"});
  out.response_name = "y";
  out.outlier_rows = {};
  out.provenance = "Hald cement data";
  return out;
}

NamedDataset load_csv(const std::string& path, const std::string& response_column,
                      std::vector<int> outlier_rows) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty file: '" + path + "'");
  std::vector<std::string> header = split_csv_line(line);
  for (auto& h : header) h = trimmed(h);
  if (header.empty()) throw ParseError("empty header row");

  int response_idx = -1;
  for (std::size_t j = 0; j < header.size(); ++j)
    if (header[j] == response_column) response_idx = static_cast<int>(j);
  if (response_idx < 0)
    throw MissingColumnError("response column '" + response_column + "' not found");

  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    if (trimmed(line).empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw ParseError("row " + std::to_string(line_no + 1) + " has " +
                       std::to_string(cells.size()) + " cells, expected " +
                       std::to_string(header.size()));
    std::vector<double> parsed(cells.size());
    for (std::size_t j = 0; j < cells.size(); ++j)
      parsed[j] = parse_cell(cells[j], line_no, j);
    rows.push_back(std::move(parsed));
    ++line_no;
  }
  if (rows.empty()) throw ParseError("no data rows in '" + path + "'");

  NamedDataset out;
  out.name = path;
  out.response_name = response_column;
  out.provenance = "loaded from " + path;
  out.outlier_rows = std::move(outlier_rows);

  const int n = static_cast<int>(rows.size());
  const int p = static_cast<int>(header.size()) - 1;
  if (p < 1) throw ParseError("need at least one predictor column");
  out.data.design.resize(n, p);
  out.data.response.resize(n);
  for (std::size_t j = 0; j < header.size(); ++j)
    if (static_cast<int>(j) != response_idx)
      out.data.column_names.push_back(header[j]);
  for (int i = 0; i < n; ++i) {
    int col = 0;
    for (std::size_t j = 0; j < header.size(); ++j) {
      if (static_cast<int>(j) == response_idx) {
        out.data.response[i] = rows[static_cast<std::size_t>(i)][j];
      } else {
        out.data.design(i, col++) = rows[static_cast<std::size_t>(i)][j];
      }
    }
  }
  out.data.validate();
  return out;
}

}  // namespace robavg
