#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sepveri {

struct SourceLoc {
  std::string file;
  int line = 0;
  int column = 0;

  bool valid() const { return line > 0; }
  std::string str() const;
};

enum class DiagCode {
  SyntaxError,
  // unsupported C features, one code per feature
  UnsupportedGoto,
  UnsupportedFloat,
  UnsupportedFunctionPointer,
  UnsupportedBitField,
  UnsupportedStringLiteral,
  UnsupportedCommaOperator,
  UnsupportedCompoundLiteral,
  UnsupportedFeature, // catch-all for features outside the subset
  UnsupportedStatement,
  UnknownPredicate,
  UnknownSort,
  UnknownFunction,
  UnknownField,
  UnknownSpec,
  UnknownBranchName,
  UnknownVariable,
  ArityMismatch,
  SortMismatch,
  DuplicateDefinition,
  UnboundPatternVariable,
  SlotOutOfRange,
  MemorySafety,
  PreconditionFailed,
  AmbiguousSpec,
  InvariantNotEstablished,
  InvariantNotPreserved,
  UnmappedBranch,
  PartitionFailed,
  AssertUnprovable,
  NameOverlap,
  UnknownBranch,
  SignatureMismatch,
  MissingReturn,
  LeakAtReturn,
  DeadBranch,
  BudgetExceeded,
  IOError,
  LockHeld,
  StaleManualIds,
};

const char* diag_code_name(DiagCode code);

enum class Severity { Error, Warning, Note };

struct Diagnostic {
  Severity severity = Severity::Error;
  DiagCode code = DiagCode::SyntaxError;
  SourceLoc loc;
  std::string message;

  std::string str() const;
};

/// Thrown by parsers on malformed input; the driver converts it to a Diagnostic.
class ParseError : public std::runtime_error {
public:
  ParseError(DiagCode code, SourceLoc loc, const std::string& msg)
      : std::runtime_error(msg), code(code), loc(std::move(loc)) {}

  DiagCode code;
  SourceLoc loc;
};

using DiagList = std::vector<Diagnostic>;

bool has_errors(const DiagList& diags);
void sort_diags(DiagList& diags);

} // namespace sepveri
