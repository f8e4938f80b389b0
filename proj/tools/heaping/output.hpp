#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace heaping::cli {

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t state = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t value);

/// Shortest round-trip decimal; "nan", "inf", "-inf" for non-finite values.
std::string num(double value);
std::string num(std::int64_t value);
std::string num(std::uint64_t value);
inline std::string num(int value) { return num(static_cast<std::int64_t>(value)); }

struct InputFile {
  std::string name;  // basename
  std::uint64_t bytes = 0;
  std::string fnv1a64;
};

/// Throws IoError when the file cannot be read.
InputFile describe_input(const std::filesystem::path& path);

/// Identity of a run: subcommand, effective configuration and input
/// digests. Worker count and output location are not part of it.
class RunInfo {
 public:
  RunInfo(std::string subcommand, nlohmann::json config, std::vector<InputFile> inputs, std::uint64_t seed);

  const std::string& hash() const { return hash_; }
  std::uint64_t seed() const { return seed_; }
  nlohmann::json to_json() const;
  /// "# run: ..." line, newline included.
  std::string csv_comment() const;
  std::string xml_comment() const;

 private:
  std::string subcommand_;
  nlohmann::json config_;
  std::vector<InputFile> inputs_;
  std::uint64_t seed_;
  std::string hash_;
};

class Csv {
 public:
  explicit Csv(const RunInfo& run) : text_(run.csv_comment()) {}

  Csv& cell(std::string_view value);
  Csv& cell(double value) { return cell(num(value)); }
  Csv& cell(std::int64_t value) { return cell(num(value)); }
  Csv& cell(std::uint64_t value) { return cell(num(value)); }
  Csv& cell(int value) { return cell(num(value)); }
  Csv& cell(const char* value) { return cell(std::string_view(value)); }
  Csv& cell(const std::string& value) { return cell(std::string_view(value)); }
  void end();
  void header(std::initializer_list<std::string_view> names);

  const std::string& text() const { return text_; }

 private:
  std::string text_;
  bool fresh_ = true;
};

/// Files of one run. Unless commit() is called, everything written is
/// removed again on destruction, so a failed run leaves no partial output.
class OutputSet {
 public:
  explicit OutputSet(std::filesystem::path directory);
  OutputSet(const OutputSet&) = delete;
  OutputSet& operator=(const OutputSet&) = delete;
  ~OutputSet();

  void write(const std::string& name, std::string_view content);
  void commit() { committed_ = true; }
  const std::vector<std::string>& names() const { return names_; }
  const std::filesystem::path& directory() const { return directory_; }

 private:
  std::filesystem::path directory_;
  std::vector<std::string> names_;
  bool committed_ = false;
};

/// Replaces characters that are awkward in file names.
std::string file_token(std::string_view label);

}  // namespace heaping::cli
