#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "heaping/errors.hpp"
#include "heaping/ingest.hpp"
#include "heaping/synth.hpp"

namespace heaping {
namespace {

LoadedDataset read(const std::string& text, std::string_view profile) {
  std::istringstream in(text);
  return read_dataset(in, builtin_profile(profile), "t");
}

TEST(Ingest, RussianThreeRows) {
  const auto r = read(
      "station_id\tregion_code\tconstituency_id\tregistered\tgiven\tcast\tleader\n"
      "1\tR1\tC1\t1000\t700\t690\t400\n"
      "2\tR1\tC1\t1500\t900\t880\t500\n"
      "3\tR2\tC2\t800\t500\t495\t300\r\n",
      "RU");
  EXPECT_EQ(r.dataset.size(), 3u);
  EXPECT_EQ(r.report.parsed, 3u);
  EXPECT_EQ(r.report.skipped, 0u);
  EXPECT_EQ(r.report.invalid, 0u);
  EXPECT_EQ(r.dataset.stations()[2].counts, (StationCounts{800, 500, 495, 300}));
  EXPECT_EQ(r.dataset.stations()[2].region_code, "R2");
}

TEST(Ingest, GermanMissingElectorateIsInvalid) {
  const auto r = read(
      "bezirk;land;wahlkreis;wahlberechtigte;ungueltige;gueltige;cdu_csu\n"
      "100;01;1;1200;10;800;300\n"
      "101;01;1;;5;400;150\n",
      "DE");
  EXPECT_EQ(r.dataset.size(), 1u);
  EXPECT_EQ(r.report.invalid, 1u);
  EXPECT_EQ(r.report.skipped, 1u);
  ASSERT_EQ(r.report.errors.size(), 1u);
  EXPECT_EQ(r.report.errors[0].line, 3u);
  EXPECT_EQ(r.report.errors[0].field, "registered");
  EXPECT_EQ(r.dataset.stations()[0].counts, (StationCounts{1200, 810, 800, 300}));
}

TEST(Ingest, SpanishDerivedSums) {
  const auto r = read(
      "mesa;provincia;municipio;censo;nulos;blancos;candidaturas;lider\n"
      "\"01-001-A\";01;001;900;4;6;600;250\n",
      "ES");
  ASSERT_EQ(r.dataset.size(), 1u);
  EXPECT_EQ(r.dataset.stations()[0].station_id, "01-001-A");
  EXPECT_EQ(r.dataset.stations()[0].counts, (StationCounts{900, 610, 606, 250}));
}

TEST(Ingest, MissingColumnNamesTheField) {
  std::istringstream in("station_id\tregion_code\tconstituency_id\tregistered\tgiven\tleader\n");
  try {
    read_dataset(in, builtin_profile("RU"), "t");
    FAIL() << "expected SchemaError";
  } catch (const SchemaError& e) {
    EXPECT_EQ(e.field(), "cast");
  }
}

TEST(Ingest, RowLevelErrors) {
  const auto r = read(
      "station_id\tregion_code\tconstituency_id\tregistered\tgiven\tcast\tleader\n"
      "1\tR\tC\t1000\t7x0\t690\t400\n"
      "2\tR\tC\t1000\t-5\t690\t400\n"
      "3\tR\tC\t1000\t700\n"
      "\n"
      "4\tR\tC\t1000\t700\t690\t400\n"
      "4\tR\tC\t1000\t700\t690\t400\n"
      "5\tR\tC\t1 000\t700\t690\t400\n",
      "RU");
  EXPECT_EQ(r.report.parsed, 1u);
  EXPECT_EQ(r.report.invalid, 5u);
  EXPECT_EQ(r.report.skipped, 6u);
  EXPECT_EQ(r.report.errors.size(), 5u);
}

TEST(Ingest, PositionalColumnsWithoutHeader) {
  const auto p = parse_profile(R"({"name":"pos","delimiter":",","has_header":false,
      "columns":{"registered":0,"given":1,"cast":2,"leader":3}})");
  std::istringstream in("1000,700,690,400\n500,300,300,100\n");
  const auto r = read_dataset(in, p, "t");
  ASSERT_EQ(r.dataset.size(), 2u);
  EXPECT_EQ(r.dataset.stations()[0].station_id, "row1");
  EXPECT_EQ(r.dataset.stations()[1].region_code, "ALL");
  std::istringstream narrow("1000,700,690\n");
  const auto short_row = read_dataset(narrow, p, "t");
  EXPECT_EQ(short_row.report.invalid, 1u);
  EXPECT_EQ(short_row.report.errors.at(0).field, "row");
}

TEST(Ingest, ProfileValidation) {
  EXPECT_THROW(parse_profile(R"({"name":"x","columns":{"registered":0}})"), SchemaError);
  EXPECT_THROW(parse_profile(R"({"name":"x","has_header":false,
      "columns":{"registered":"a","given":1,"cast":2,"leader":3}})"),
               SchemaError);
  EXPECT_THROW(builtin_profile("XX"), ParameterError);
  for (const auto& name : builtin_profile_names()) {
    EXPECT_NO_THROW(builtin_profile(name).mapping.validate()) << name;
  }
}

TEST(Ingest, UnreadableFile) {
  EXPECT_THROW(load_dataset("/nonexistent/none.tsv", builtin_profile("RU")), IoError);
}

TEST(Ingest, CanonicalRoundTrip) {
  GeneratorConfig g;
  g.n_stations = 300;
  g.regions = 7;
  g.size = LogNormalSize{};
  const auto original = generate(g, 4).dataset;
  const auto path = std::filesystem::temp_directory_path() / "heaping_roundtrip.tsv";
  write_canonical_tsv(original, path);
  const auto loaded = load_dataset(path, builtin_profile("canonical"), original.label());
  std::filesystem::remove(path);
  EXPECT_EQ(loaded.dataset, original);
  EXPECT_EQ(loaded.report.skipped, 0u);
}

TEST(Ingest, RegionSumsMatchTotal) {
  GeneratorConfig g;
  g.n_stations = 500;
  g.regions = 9;
  const auto d = generate(g, 2).dataset;
  std::map<std::string, Count> per_region;
  for (const auto& s : d.stations()) per_region[s.region_code] += s.counts.registered;
  Count sum = 0;
  for (const auto& [region, v] : per_region) sum += v;
  EXPECT_EQ(sum, d.totals().registered);
}

std::map<std::string, StationCounts> sums(const ElectionDataset& d) {
  std::map<std::string, StationCounts> out;
  for (const auto& s : d.stations()) {
    auto& t = out[s.region_code];
    t.registered += s.counts.registered;
    t.given += s.counts.given;
    t.cast += s.counts.cast;
    t.leader += s.counts.leader;
  }
  return out;
}

TEST(Subtotals, ExactAgreement) {
  GeneratorConfig g;
  g.n_stations = 200;
  g.regions = 3;
  const auto d = generate(g, 1).dataset;
  const auto check = verify_subtotals(d, sums(d));
  EXPECT_TRUE(check.ok());
}

TEST(Subtotals, PerturbedLeaderShowsPlusSeven) {
  GeneratorConfig g;
  g.n_stations = 200;
  g.regions = 3;
  const auto d = generate(g, 1).dataset;
  const auto reference = sums(d);
  auto rows = d.stations();
  rows[4].counts.leader += 7;
  const auto check = verify_subtotals(ElectionDataset("t", rows), reference);
  ASSERT_EQ(check.discrepancies.size(), 1u);
  EXPECT_EQ(check.discrepancies[0].region, rows[4].region_code);
  EXPECT_EQ(check.discrepancies[0].field, Field::leader);
  EXPECT_EQ(check.discrepancies[0].difference, 7);
  EXPECT_TRUE(check.unmatched.empty());
}

TEST(Subtotals, UnknownRegionIsUnmatched) {
  GeneratorConfig g;
  g.n_stations = 50;
  const auto d = generate(g, 1).dataset;
  auto reference = sums(d);
  reference["ZZ"] = {1, 1, 1, 1};
  const auto check = verify_subtotals(d, reference);
  EXPECT_TRUE(check.discrepancies.empty());
  EXPECT_EQ(check.unmatched, std::vector<std::string>{"ZZ"});
  EXPECT_FALSE(check.ok());
}

}  // namespace
}  // namespace heaping
