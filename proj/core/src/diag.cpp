#include "sepveri/diag.hpp"

#include <algorithm>
#include <sstream>

namespace sepveri {

std::string SourceLoc::str() const {
  std::ostringstream os;
  os << (file.empty() ? "<input>" : file);
  if (line > 0) {
    os << ":" << line;
    if (column > 0) os << ":" << column;
  }
  return os.str();
}

const char* diag_code_name(DiagCode code) {
  switch (code) {
    case DiagCode::SyntaxError: return "syntax-error";
    case DiagCode::UnsupportedGoto: return "unsupported-goto";
    case DiagCode::UnsupportedFloat: return "unsupported-float";
    case DiagCode::UnsupportedFunctionPointer: return "unsupported-function-pointer";
    case DiagCode::UnsupportedBitField: return "unsupported-bit-field";
    case DiagCode::UnsupportedStringLiteral: return "unsupported-string-literal";
    case DiagCode::UnsupportedCommaOperator: return "unsupported-comma-operator";
    case DiagCode::UnsupportedCompoundLiteral: return "unsupported-compound-literal";
    case DiagCode::UnsupportedFeature: return "unsupported-feature";
    case DiagCode::UnsupportedStatement: return "unsupported-statement";
    case DiagCode::UnknownPredicate: return "unknown-predicate";
    case DiagCode::UnknownSort: return "unknown-sort";
    case DiagCode::UnknownFunction: return "unknown-function";
    case DiagCode::UnknownField: return "unknown-field";
    case DiagCode::UnknownSpec: return "unknown-spec";
    case DiagCode::UnknownBranchName: return "unknown-branch-name";
    case DiagCode::UnknownVariable: return "unknown-variable";
    case DiagCode::ArityMismatch: return "arity-mismatch";
    case DiagCode::SortMismatch: return "sort-mismatch";
    case DiagCode::DuplicateDefinition: return "duplicate-definition";
    case DiagCode::UnboundPatternVariable: return "unbound-pattern-variable";
    case DiagCode::SlotOutOfRange: return "slot-out-of-range";
    case DiagCode::MemorySafety: return "memory-safety";
    case DiagCode::PreconditionFailed: return "precondition-failed";
    case DiagCode::AmbiguousSpec: return "ambiguous-spec";
    case DiagCode::InvariantNotEstablished: return "invariant-not-established";
    case DiagCode::InvariantNotPreserved: return "invariant-not-preserved";
    case DiagCode::UnmappedBranch: return "unmapped-branch";
    case DiagCode::PartitionFailed: return "partition-failed";
    case DiagCode::AssertUnprovable: return "assert-unprovable";
    case DiagCode::NameOverlap: return "name-overlap";
    case DiagCode::UnknownBranch: return "unknown-branch";
    case DiagCode::SignatureMismatch: return "signature-mismatch";
    case DiagCode::MissingReturn: return "missing-return";
    case DiagCode::LeakAtReturn: return "leak-at-return";
    case DiagCode::DeadBranch: return "dead-branch";
    case DiagCode::BudgetExceeded: return "budget-exceeded";
    case DiagCode::IOError: return "io-error";
    case DiagCode::LockHeld: return "lock-held";
    case DiagCode::StaleManualIds: return "stale-manual-ids";
  }
  return "unknown";
}

std::string Diagnostic::str() const {
  std::ostringstream os;
  os << loc.str() << ": ";
  switch (severity) {
    case Severity::Error: os << "error"; break;
    case Severity::Warning: os << "warning"; break;
    case Severity::Note: os << "note"; break;
  }
  os << "[" << diag_code_name(code) << "]: " << message;
  return os.str();
}

bool has_errors(const DiagList& diags) {
  return std::any_of(diags.begin(), diags.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

void sort_diags(DiagList& diags) {
  std::stable_sort(diags.begin(), diags.end(), [](const Diagnostic& a, const Diagnostic& b) {
    if (a.loc.file != b.loc.file) return a.loc.file < b.loc.file;
    if (a.loc.line != b.loc.line) return a.loc.line < b.loc.line;
    return a.loc.column < b.loc.column;
  });
}

} // namespace sepveri
