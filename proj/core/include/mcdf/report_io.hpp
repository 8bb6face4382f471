#pragma once

// Machine-readable run artifacts. Result documents are JSON (schema
// "mcdf-result/1") with the resolved config echoed, the solver report, the
// certificate and the full complex state as [re, im] pairs. Wall-clock time
// is deliberately left out so reruns are byte-identical.

#include <string>
#include <vector>

#include "mcdf/config.hpp"

namespace mcdf {

inline constexpr const char* kResultSchema = "mcdf-result/1";
inline constexpr const char* kSweepSchema = "mcdf-sweep/1";

std::string result_document(const RunConfig& config, double c, const SolverReport& report,
                            const Certificate& certificate, const MchfResult* mchf = nullptr);

/// Delimited table, one row per record, columns named after SweepRecord fields.
std::string sweep_table(const std::vector<SweepRecord>& records);

std::string sweep_summary_document(const RunConfig& config, const SweepResult& sweep,
                                   const SweepSummary& summary, const PersistenceReport& persistence);

/// Reads the state of a result document, re-targeted to `model`'s basis.
/// Throws ConfigError on schema or dimension mismatch.
SplitState load_state(const std::string& path, const Hamiltonian& model);
SplitState parse_state(const std::string& document, const Hamiltonian& model);

/// Writes `text` to `path`, creating parent directories.
void write_file(const std::string& path, const std::string& text);

}  // namespace mcdf
