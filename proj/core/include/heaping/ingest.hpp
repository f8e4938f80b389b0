#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "heaping/model.hpp"

namespace heaping {

enum class Field { station_id, region_code, constituency_id, registered, given, cast, leader };

std::string_view to_string(Field field);
bool is_count_field(Field field);

/// Zero-based column index or header name.
using ColumnRef = std::variant<std::size_t, std::string>;

struct ColumnMapping {
  char delimiter = '\t';
  bool has_header = true;
  std::map<Field, ColumnRef> columns;
  /// Count fields defined as the sum of several source columns.
  std::map<Field, std::vector<ColumnRef>> derived;

  /// Every count field must come from exactly one of columns/derived;
  /// header names need has_header. Throws SchemaError naming the field.
  void validate() const;
};

struct CountryProfile {
  std::string name;
  ColumnMapping mapping;
  std::string notes;
};

/// Profile JSON: {"name", "notes", "delimiter", "has_header",
/// "columns": {field: name|index}, "derived": {field: [name|index, ...]}}.
CountryProfile parse_profile(std::string_view json);
CountryProfile load_profile_file(const std::filesystem::path& path);

/// canonical, RU, ES, DE, PL. Throws ParameterError for other names.
const CountryProfile& builtin_profile(std::string_view name);
std::vector<std::string> builtin_profile_names();

struct RowError {
  std::size_t line = 0;  // 1-based physical line
  std::string field;
  std::string message;
};

struct IngestReport {
  std::string source;
  std::string profile;
  std::size_t parsed = 0;   // rows turned into stations
  std::size_t skipped = 0;  // invalid rows plus blank lines
  std::size_t invalid = 0;  // rows with a row-level error
  std::vector<RowError> errors;

  std::string to_json() const;
};

struct LoadedDataset {
  ElectionDataset dataset;
  IngestReport report;
};

/// Streams the file row by row. Unreadable file -> IoError; a mapped column
/// missing from the header or beyond the column count -> SchemaError.
/// Non-integer or empty count cells, short rows and repeated station ids
/// are recorded in the report and the row is skipped. Without a station_id
/// column the id is "row<line>"; without region_code every station goes to
/// region "ALL". The label defaults to the file stem.
LoadedDataset load_dataset(const std::filesystem::path& path, const CountryProfile& profile,
                           std::string label = {});
LoadedDataset read_dataset(std::istream& in, const CountryProfile& profile, std::string label,
                           std::string source = "<stream>");

/// Header plus one LF-terminated row per station, no trailing delimiter.
void write_canonical_tsv(const ElectionDataset& dataset, std::ostream& out);
void write_canonical_tsv(const ElectionDataset& dataset, const std::filesystem::path& path);

struct SubtotalDiscrepancy {
  std::string region;
  Field field = Field::registered;
  Count expected = 0;
  Count actual = 0;
  Count difference = 0;  // actual - expected
};

struct SubtotalCheck {
  std::vector<SubtotalDiscrepancy> discrepancies;
  std::vector<std::string> unmatched;  // reference regions absent from the data

  bool ok() const { return discrepancies.empty() && unmatched.empty(); }
  std::string to_json() const;
};

SubtotalCheck verify_subtotals(const ElectionDataset& dataset,
                               const std::map<std::string, StationCounts>& reference);

/// TSV with header `region_code registered given cast leader`.
std::map<std::string, StationCounts> load_subtotals(const std::filesystem::path& path);

}  // namespace heaping
