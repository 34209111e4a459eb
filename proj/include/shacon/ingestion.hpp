#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "shacon/corpus.hpp"

namespace shacon {

/// On-disk bundle layout: a directory holding these three files.
inline constexpr const char* kManifestFile = "corpus.manifest";
inline constexpr const char* kTranscriptsFile = "transcripts.ndj";
inline constexpr const char* kNamingsFile = "namings.ndj";
inline constexpr const char* kFormatVersion = "1.0";

/// Malformed bundle content. `file` and `line` locate the record (line is
/// 1-based, 0 for whole-file problems), `field` names the offending key.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string file, std::size_t line, std::string field, const std::string& message);

  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::string file_;
  std::size_t line_;
  std::string field_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Structural parse only: every record is well-formed and references known
/// dyads and trials. The result is canonicalized but not invariant-checked.
Corpus read_corpus(const std::filesystem::path& bundle);

/// read_corpus followed by validate(); throws ValidationError when the
/// report is non-empty.
Corpus parse_corpus(const std::filesystem::path& bundle);

/// Writes the canonical form of `c`. Output is byte-for-byte deterministic.
void write_corpus(const Corpus& c, const std::filesystem::path& bundle);

}  // namespace shacon
