#include "selbias/csv.hpp"

#include <cmath>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>

#include "selbias/errors.hpp"
#include "selbias/format.hpp"

namespace selbias {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

/// Splits on LF, tolerating CRLF and a missing final newline. Strips a UTF-8
/// BOM from the first line.
std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.emplace_back(line);
    if (end == text.size()) break;
    start = end + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (!lines.empty() && lines.front().size() >= 3 &&
      lines.front().compare(0, 3, "\xEF\xBB\xBF") == 0) {
    lines.front().erase(0, 3);
  }
  return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

double parse_number(const std::string& field, std::size_t row, const char* col) {
  const char* begin = field.data();
  const char* end = begin + field.size();
  double value = 0.0;
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc{} || res.ptr != end || field.empty()) {
    throw FormatError("row " + std::to_string(row) + ": cannot parse " + col +
                      " value '" + field + "'");
  }
  return value;
}

IngestRecord parse_record(const std::vector<std::string>& fields, std::size_t row) {
  IngestRecord rec;
  rec.model = fields[0];
  rec.year = parse_number(fields[1], row, "year");
  rec.tokens = parse_number(fields[2], row, "tokens");
  if (!(rec.year >= kYearMin && rec.year <= kYearMax)) {
    throw ValueError("row " + std::to_string(row) + ": year " +
                     fmt_double(rec.year) + " outside [1950, 2100]");
  }
  if (!(rec.tokens > 0.0) || !std::isfinite(rec.tokens)) {
    throw ValueError("row " + std::to_string(row) +
                     ": tokens must be finite and > 0");
  }
  return rec;
}

struct ParsedCsv {
  std::vector<IngestRecord> records;
  std::vector<double> extra;  // the lnL column in fit mode
};

ParsedCsv parse_csv(const std::filesystem::path& path, const char* header,
                    std::size_t n_cols) {
  const auto lines = split_lines(read_file(path));
  if (lines.empty()) throw FormatError(path.string() + ": empty file");
  if (lines.front() != header) {
    throw FormatError(path.string() + ": expected header '" + header +
                      "', got '" + lines.front() + "'");
  }
  ParsedCsv out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = split_fields(lines[i]);
    if (fields.size() != n_cols) {
      throw FormatError("row " + std::to_string(i) + ": expected " +
                        std::to_string(n_cols) + " fields, got " +
                        std::to_string(fields.size()));
    }
    out.records.push_back(parse_record(fields, i));
    if (n_cols == 4) {
      const double lnl = parse_number(fields[3], i, "lnL");
      if (!std::isfinite(lnl)) {
        throw ValueError("row " + std::to_string(i) + ": lnL must be finite");
      }
      out.extra.push_back(lnl);
    }
  }
  if (out.records.size() < 5) {
    throw InsufficientDataError(path.string() + ": need at least 5 data rows, got " +
                                std::to_string(out.records.size()));
  }
  return out;
}

Dataset to_dataset(const std::vector<IngestRecord>& records,
                   std::optional<double> y0_override) {
  Dataset data;
  data.years.reserve(records.size());
  data.lnd.reserve(records.size());
  double min_year = records.front().year;
  for (const auto& rec : records) {
    data.years.push_back(rec.year);
    data.lnd.push_back(std::log(rec.tokens));
    min_year = std::min(min_year, rec.year);
  }
  data.y0 = y0_override ? *y0_override : std::floor(min_year);
  return data;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace

std::string render_dataset_csv(const Dataset& data) {
  std::string out = "model,year,tokens\n";
  char label[16];
  for (std::size_t i = 0; i < data.size(); ++i) {
    std::snprintf(label, sizeof label, "synth-%04zu", i + 1);
    out += label;
    out += ',';
    out += fmt_double(data.years[i]);
    out += ',';
    out += fmt_double(std::exp(data.lnd[i]));
    out += '\n';
  }
  return out;
}

const char* const kSweepCsvHeader =
    "rho,implied_corr,mean_beta_hat,sd_beta_hat,plim_beta,"
    "mean_beta_year_hat,sd_beta_year_hat,plim_beta_year,"
    "mean_ratio,median_ratio,sd_ratio,plim_ratio,n_degenerate,sign_ok";

Dataset ingest_csv(const std::filesystem::path& path,
                   std::optional<double> y0_override) {
  const auto parsed = parse_csv(path, "model,year,tokens", 3);
  return to_dataset(parsed.records, y0_override);
}

FitData ingest_fit_csv(const std::filesystem::path& path,
                       std::optional<double> y0_override) {
  auto parsed = parse_csv(path, "model,year,tokens,lnL", 4);
  return FitData{to_dataset(parsed.records, y0_override), std::move(parsed.extra)};
}

void emit_dataset_csv(const Dataset& data, const std::filesystem::path& path) {
  data.validate();
  write_file(path, render_dataset_csv(data));
}

void emit_sweep_csv(const std::vector<SweepRow>& rows,
                    const std::filesystem::path& path) {
  if (rows.empty()) throw DataError("emit_sweep_csv: no rows to write");
  std::string out = kSweepCsvHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += fmt_double(r.rho);
    out += ',';
    out += fmt_double(r.implied_corr);
    out += ',';
    out += fmt_double(r.mean_beta_hat);
    out += ',';
    out += fmt_double(r.sd_beta_hat);
    out += ',';
    out += fmt_double(r.plim_beta);
    out += ',';
    out += fmt_double(r.mean_beta_year_hat);
    out += ',';
    out += fmt_double(r.sd_beta_year_hat);
    out += ',';
    out += fmt_double(r.plim_beta_year);
    out += ',';
    out += fmt_double(r.mean_ratio);
    out += ',';
    out += fmt_double(r.median_ratio);
    out += ',';
    out += fmt_double(r.sd_ratio);
    out += ',';
    out += fmt_double(r.plim_ratio);
    out += ',';
    out += std::to_string(r.n_degenerate);
    out += ',';
    out += r.sign_ok ? "true" : "false";
    out += '\n';
  }
  write_file(path, out);
}

}  // namespace selbias
