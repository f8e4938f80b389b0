#include "heaping/ingest.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "heaping/errors.hpp"

namespace heaping {

namespace {

using nlohmann::json;

constexpr std::array kFields = {Field::station_id, Field::region_code, Field::constituency_id, Field::registered,
                                Field::given,      Field::cast,        Field::leader};
constexpr std::array kCountFields = {Field::registered, Field::given, Field::cast, Field::leader};

const char* const kBuiltinProfiles[] = {
#include "builtin_profiles.inc"
};

Field parse_field(std::string_view name) {
  for (Field f : kFields) {
    if (to_string(f) == name) return f;
  }
  throw SchemaError(std::string(name), "unknown field '" + std::string(name) + "' in profile");
}

ColumnRef parse_ref(const json& value, const std::string& field) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_unsigned()) return value.get<std::size_t>();
  throw SchemaError(field, "column of '" + field + "' must be a header name or a non-negative index");
}

std::string describe(const ColumnRef& ref) {
  if (const auto* i = std::get_if<std::size_t>(&ref)) return "column " + std::to_string(*i);
  return "column '" + std::get<std::string>(ref) + "'";
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

void split(std::string_view line, char delimiter, std::vector<std::string_view>& cells) {
  cells.clear();
  std::size_t start = 0;
  while (true) {
    const std::size_t end = line.find(delimiter, start);
    cells.push_back(trim(line.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start)));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
}

bool blank(std::string_view line) {
  for (char c : line) {
    if (c != ' ' && c != '\r' && c != '\t') return false;
  }
  return true;
}

std::optional<Count> parse_count(std::string_view cell) {
  if (cell.empty()) return std::nullopt;
  Count value = 0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || value < 0) return std::nullopt;
  return value;
}

// Mapping resolved against the header: every field becomes a list of
// column indices (one entry unless derived).
struct ResolvedMapping {
  std::array<std::vector<std::size_t>, kFields.size()> columns;
  std::size_t min_columns = 0;
};

ResolvedMapping resolve(const ColumnMapping& mapping, const std::vector<std::string_view>& header) {
  ResolvedMapping r;
  auto index_of = [&](const ColumnRef& ref, Field field) -> std::size_t {
    if (const auto* i = std::get_if<std::size_t>(&ref)) {
      if (!header.empty() && *i >= header.size()) {
        throw SchemaError(std::string(to_string(field)), "field '" + std::string(to_string(field)) + "': " +
                                                             describe(ref) + " is beyond the " +
                                                             std::to_string(header.size()) + " columns of the file");
      }
      return *i;
    }
    const auto& name = std::get<std::string>(ref);
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    throw SchemaError(std::string(to_string(field)),
                      "field '" + std::string(to_string(field)) + "': " + describe(ref) + " not found in header");
  };
  for (const auto& [field, ref] : mapping.columns) {
    r.columns[static_cast<std::size_t>(field)].push_back(index_of(ref, field));
  }
  for (const auto& [field, refs] : mapping.derived) {
    for (const auto& ref : refs) r.columns[static_cast<std::size_t>(field)].push_back(index_of(ref, field));
  }
  for (const auto& cols : r.columns) {
    for (std::size_t c : cols) r.min_columns = std::max(r.min_columns, c + 1);
  }
  return r;
}

void put(std::ostream& out, Count v) {
  std::array<char, 24> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  out.write(buf.data(), ptr - buf.data());
}

}  // namespace

std::string_view to_string(Field field) {
  switch (field) {
    case Field::station_id: return "station_id";
    case Field::region_code: return "region_code";
    case Field::constituency_id: return "constituency_id";
    case Field::registered: return "registered";
    case Field::given: return "given";
    case Field::cast: return "cast";
    case Field::leader: return "leader";
  }
  return "unknown";
}

bool is_count_field(Field field) {
  return field == Field::registered || field == Field::given || field == Field::cast || field == Field::leader;
}

void ColumnMapping::validate() const {
  for (Field f : kCountFields) {
    const bool direct = columns.contains(f);
    const bool summed = derived.contains(f);
    const std::string name(to_string(f));
    if (!direct && !summed) throw SchemaError(name, "count field '" + name + "' is not mapped");
    if (direct && summed) throw SchemaError(name, "count field '" + name + "' is both mapped and derived");
    if (summed && derived.at(f).empty()) throw SchemaError(name, "derived field '" + name + "' sums no columns");
  }
  for (const auto& [f, refs] : derived) {
    if (!is_count_field(f)) {
      throw SchemaError(std::string(to_string(f)), "only count fields can be derived");
    }
  }
  auto check = [&](Field f, const ColumnRef& ref) {
    if (!has_header && std::holds_alternative<std::string>(ref)) {
      throw SchemaError(std::string(to_string(f)), "field '" + std::string(to_string(f)) +
                                                       "' refers to a header name but the mapping has no header");
    }
  };
  for (const auto& [f, ref] : columns) check(f, ref);
  for (const auto& [f, refs] : derived) {
    for (const auto& ref : refs) check(f, ref);
  }
}

CountryProfile parse_profile(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("profile", std::string("profile is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw SchemaError("profile", "profile must be a JSON object");
  CountryProfile p;
  if (!j.contains("name") || !j["name"].is_string() || j["name"].get<std::string>().empty()) {
    throw SchemaError("name", "profile needs a non-empty name");
  }
  p.name = j["name"].get<std::string>();
  p.notes = j.value("notes", std::string());
  const std::string delimiter = j.value("delimiter", std::string("\t"));
  if (delimiter.size() != 1 || delimiter[0] == '\n' || delimiter[0] == '"') {
    throw SchemaError("delimiter", "delimiter must be a single character");
  }
  p.mapping.delimiter = delimiter[0];
  p.mapping.has_header = j.value("has_header", true);
  if (j.contains("columns")) {
    if (!j["columns"].is_object()) throw SchemaError("columns", "columns must be an object");
    for (const auto& [key, value] : j["columns"].items()) p.mapping.columns[parse_field(key)] = parse_ref(value, key);
  }
  if (j.contains("derived")) {
    if (!j["derived"].is_object()) throw SchemaError("derived", "derived must be an object");
    for (const auto& [key, value] : j["derived"].items()) {
      if (!value.is_array()) throw SchemaError(key, "derived field '" + key + "' must list columns");
      auto& refs = p.mapping.derived[parse_field(key)];
      for (const auto& v : value) refs.push_back(parse_ref(v, key));
    }
  }
  p.mapping.validate();
  return p;
}

CountryProfile load_profile_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read profile " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_profile(buffer.str());
}

const CountryProfile& builtin_profile(std::string_view name) {
  static const std::vector<CountryProfile> profiles = [] {
    std::vector<CountryProfile> all;
    for (const char* text : kBuiltinProfiles) all.push_back(parse_profile(text));
    return all;
  }();
  for (const auto& p : profiles) {
    if (p.name == name) return p;
  }
  throw ParameterError("unknown profile '" + std::string(name) + "'");
}

std::vector<std::string> builtin_profile_names() {
  std::vector<std::string> names;
  for (const char* text : kBuiltinProfiles) names.push_back(json::parse(text).at("name").get<std::string>());
  return names;
}

std::string IngestReport::to_json() const {
  json j;
  j["source"] = source;
  j["profile"] = profile;
  j["parsed"] = parsed;
  j["skipped"] = skipped;
  j["invalid"] = invalid;
  j["errors"] = json::array();
  for (const auto& e : errors) j["errors"].push_back({{"line", e.line}, {"field", e.field}, {"message", e.message}});
  return j.dump(2);
}

LoadedDataset load_dataset(const std::filesystem::path& path, const CountryProfile& profile, std::string label) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  if (label.empty()) label = path.stem().string();
  return read_dataset(in, profile, std::move(label), path.filename().string());
}

LoadedDataset read_dataset(std::istream& in, const CountryProfile& profile, std::string label, std::string source) {
  const ColumnMapping& mapping = profile.mapping;
  mapping.validate();
  IngestReport report;
  report.source = std::move(source);
  report.profile = profile.name;

  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string_view> cells;
  std::vector<std::string> header_storage;
  std::vector<std::string_view> header;
  if (mapping.has_header) {
    while (std::getline(in, line)) {
      ++line_no;
      if (!blank(line)) break;
    }
    if (blank(line)) throw SchemaError("header", "file has no header row");
    split(line, mapping.delimiter, cells);
    header_storage.assign(cells.begin(), cells.end());
    header.assign(header_storage.begin(), header_storage.end());
  }
  const ResolvedMapping resolved = resolve(mapping, header);
  auto columns_of = [&](Field f) -> const std::vector<std::size_t>& {
    return resolved.columns[static_cast<std::size_t>(f)];
  };

  std::vector<StationRecord> stations;
  std::unordered_set<std::string> seen;
  auto fail = [&](Field f, std::string message) {
    report.errors.push_back({line_no, std::string(to_string(f)), std::move(message)});
    ++report.invalid;
    ++report.skipped;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) {
      ++report.skipped;
      continue;
    }
    split(line, mapping.delimiter, cells);
    if (cells.size() < resolved.min_columns) {
      report.errors.push_back({line_no, "row", "expected at least " + std::to_string(resolved.min_columns) +
                                                   " columns, found " + std::to_string(cells.size())});
      ++report.invalid;
      ++report.skipped;
      continue;
    }
    StationRecord rec;
    std::array<Count, 4> counts{};
    bool ok = true;
    for (std::size_t k = 0; k < kCountFields.size() && ok; ++k) {
      const Field f = kCountFields[k];
      for (std::size_t c : columns_of(f)) {
        const auto v = parse_count(cells[c]);
        if (!v) {
          fail(f, cells[c].empty() ? "missing value" : "not a non-negative integer: '" + std::string(cells[c]) + "'");
          ok = false;
          break;
        }
        if (counts[k] > std::numeric_limits<Count>::max() - *v) {
          fail(f, "count overflows");
          ok = false;
          break;
        }
        counts[k] += *v;
      }
    }
    if (!ok) continue;
    rec.counts = StationCounts{counts[0], counts[1], counts[2], counts[3]};
    const auto& id_cols = columns_of(Field::station_id);
    rec.station_id = id_cols.empty() ? "row" + std::to_string(line_no) : std::string(cells[id_cols.front()]);
    if (rec.station_id.empty()) {
      fail(Field::station_id, "missing value");
      continue;
    }
    const auto& region_cols = columns_of(Field::region_code);
    rec.region_code = region_cols.empty() ? "ALL" : std::string(cells[region_cols.front()]);
    const auto& cons_cols = columns_of(Field::constituency_id);
    if (!cons_cols.empty()) rec.constituency_id = std::string(cells[cons_cols.front()]);
    if (!seen.insert(rec.station_id).second) {
      fail(Field::station_id, "repeated station id '" + rec.station_id + "'");
      continue;
    }
    stations.push_back(std::move(rec));
    ++report.parsed;
  }
  if (in.bad()) throw IoError("read error in " + report.source);
  return {ElectionDataset(std::move(label), std::move(stations)), std::move(report)};
}

void write_canonical_tsv(const ElectionDataset& dataset, std::ostream& out) {
  out << "station_id\tregion_code\tconstituency_id\tregistered\tgiven\tcast\tleader\n";
  for (const auto& s : dataset.stations()) {
    out << s.station_id << '\t' << s.region_code << '\t' << s.constituency_id << '\t';
    put(out, s.counts.registered);
    out << '\t';
    put(out, s.counts.given);
    out << '\t';
    put(out, s.counts.cast);
    out << '\t';
    put(out, s.counts.leader);
    out << '\n';
  }
}

void write_canonical_tsv(const ElectionDataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  write_canonical_tsv(dataset, out);
  out.flush();
  if (!out) throw IoError("write error on " + path.string());
}

SubtotalCheck verify_subtotals(const ElectionDataset& dataset, const std::map<std::string, StationCounts>& reference) {
  std::map<std::string, StationCounts> actual;
  for (const auto& s : dataset.stations()) {
    auto& t = actual[s.region_code];
    t.registered += s.counts.registered;
    t.given += s.counts.given;
    t.cast += s.counts.cast;
    t.leader += s.counts.leader;
  }
  SubtotalCheck check;
  for (const auto& [region, expected] : reference) {
    const auto it = actual.find(region);
    if (it == actual.end()) {
      check.unmatched.push_back(region);
      continue;
    }
    const StationCounts& got = it->second;
    const std::array<std::pair<Field, std::pair<Count, Count>>, 4> pairs = {{
        {Field::registered, {expected.registered, got.registered}},
        {Field::given, {expected.given, got.given}},
        {Field::cast, {expected.cast, got.cast}},
        {Field::leader, {expected.leader, got.leader}},
    }};
    for (const auto& [field, values] : pairs) {
      if (values.first != values.second) {
        check.discrepancies.push_back({region, field, values.first, values.second, values.second - values.first});
      }
    }
  }
  return check;
}

std::string SubtotalCheck::to_json() const {
  json j;
  j["discrepancies"] = json::array();
  for (const auto& d : discrepancies) {
    j["discrepancies"].push_back({{"region", d.region},
                                  {"field", std::string(heaping::to_string(d.field))},
                                  {"expected", d.expected},
                                  {"actual", d.actual},
                                  {"difference", d.difference}});
  }
  j["unmatched"] = unmatched;
  return j.dump(2);
}

std::map<std::string, StationCounts> load_subtotals(const std::filesystem::path& path) {
  CountryProfile p;
  p.name = "subtotals";
  p.mapping.columns = {{Field::station_id, std::string("region_code")},
                       {Field::registered, std::string("registered")},
                       {Field::given, std::string("given")},
                       {Field::cast, std::string("cast")},
                       {Field::leader, std::string("leader")}};
  const auto loaded = load_dataset(path, p);
  if (loaded.report.invalid > 0) {
    const auto& e = loaded.report.errors.front();
    throw SchemaError(e.field, path.filename().string() + " line " + std::to_string(e.line) + ": " + e.message);
  }
  std::map<std::string, StationCounts> out;
  for (const auto& s : loaded.dataset.stations()) out[s.station_id] = s.counts;
  return out;
}

}  // namespace heaping
