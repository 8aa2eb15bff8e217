#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "uhf/actions.hpp"
#include "uhf/groups.hpp"
#include "uhf/linalg.hpp"
#include "uhf/sequence.hpp"

namespace uhf {

/// Input error with a 1-based position in the document.
class DocumentError : public Error {
 public:
  DocumentError(std::size_t line, std::size_t column, const std::string& message);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

struct DocumentEntry {
  std::string key;
  std::string value;
  std::size_t line = 0;
  std::size_t column = 0;  // of the value
};

struct DocumentSection {
  std::string name;
  std::size_t line = 0;
  std::vector<DocumentEntry> entries;

  const DocumentEntry* find(const std::string& key) const;
  const DocumentEntry& require(const std::string& key) const;
  std::string get(const std::string& key, const std::string& fallback) const;
};

/// Sections [group], [factors], [action] and any number of [task] blocks of
/// `key = value` lines. '#' starts a comment.
struct ActionSpecDocument {
  std::string text;
  DocumentSection group;
  DocumentSection factors;
  DocumentSection action;
  std::vector<DocumentSection> tasks;

  static ActionSpecDocument parse(const std::string& text);
};

/// Entries `a+bi`, `ph(p/q)` (exp(2 pi i p/q)); rows separated by ';', entries by ','.
/// Forms: `[..; ..]`, `diag(..)`, `perm(i0, i1, ..)` (column j to row i_j).
/// Monomial literals with exact phases stay exact.
Unitary parse_matrix_literal(const std::string& text);
/// Table index or label for table groups; `g0+2g1`, `1,2` or `0` for presented groups.
Element parse_element(const GroupSpec& g, const std::string& text);

GroupSpec build_group(const DocumentSection& s);
std::optional<FactorSequence> build_factors(const DocumentSection& s);
ProductAction build_action(const ActionSpecDocument& doc, const GroupSpec& g);

struct RunOptions {
  std::string command;
  std::map<std::string, std::string> overrides;  // task parameters from the command line
};

struct RunResult {
  int exit_code = 0;  // 0 pass, 1 certificate FAIL, 2 input error
  std::string report;  // human-readable summary
  std::string csv;
  std::optional<std::string> plan;  // replay JSON
};

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitInput = 2;

const std::vector<std::string>& cli_commands();

/// Runs one subcommand with parameters from the first [task] whose kind matches,
/// then the overrides. Input errors are reported with exit code 2.
RunResult run_command(const ActionSpecDocument& doc, const RunOptions& options);
RunResult run_document(const std::string& text, const RunOptions& options);

}  // namespace uhf
