#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "perideg/eqdeg.hpp"
#include "perideg/systems.hpp"

namespace perideg {

enum class Verdict { Proven, NotDecided };

std::string to_string(Verdict v);

struct ComparisonRow {
    int k = 0;
    long long lhs = 0;  // index coordinate at infinity
    long long rhs = 0;  // sum of coordinates over the stationary points
};

struct PeriodNote {
    std::string owner;
    std::vector<int> modes;
    std::vector<double> periods;  // T / g over gcds of nonempty mode subsets
};

/// Machine-checkable record of one existence analysis.  Every integer in
/// the tables traces back to a named operation via `provenance`.
struct ExistenceCertificate {
    Verdict verdict = Verdict::NotDecided;
    std::optional<int> witness_k;
    long long lhs = 0;
    long long rhs = 0;

    double period = 0.0;
    int k_max = 0;  // coordinates 1..k_max were examined
    std::set<int> global_exclusion;
    std::vector<ComparisonRow> table;  // rows for k not excluded

    EquivariantIndex at_infinity;
    std::vector<EquivariantIndex> points;

    long long so2_infinity = 0;
    long long so2_sum = 0;

    std::vector<PeriodNote> minimal_period_notes;

    Tolerances tols;
    std::string input_hash;
    std::map<std::string, std::string> provenance;
};

struct AnalyzeOptions {
    Tolerances tols{};
    std::optional<int> k_max_override;
    std::string input_hash;
};

/// Runs the full degree pipeline: resolves every local index, assembles the
/// equivariant indices, and scans the coordinates k = 1..k_max outside the
/// exclusion set in ascending order.  The first strict inequality between
/// the coordinate at infinity and the sum over stationary points proves a
/// non-stationary periodic solution; otherwise the verdict is not-decided
/// with the full comparison table attached.
ExistenceCertificate analyze(const SystemSpec& spec, const AnalyzeOptions& opts = {});

struct SumFormulaCheck {
    long long lhs = 0;      // index at infinity
    long long rhs = 0;      // sum of point indices
    long long residual = 0;  // lhs - rhs; nonzero flags an inconsistent input
};

SumFormulaCheck sum_formula_check(const SystemSpec& spec, const Tolerances& tols = {});

/// Possible minimal periods of solutions branching near a resonant point:
/// T / g over the gcds g of nonempty subsets of the resonant modes.
std::set<double> minimal_period_menu(const std::set<int>& resonant_modes, double period);

/// Statement of the continuation alternative for a one-parameter family
/// whose member at parameter 0 has a proven certificate.
struct ContinuationCertificate {
    ExistenceCertificate base;
    int witness_k = 0;
    /// True when no stationary point is resonant at any mode k >= 1; the
    /// accumulation alternative is then excluded and the branch pair is
    /// guaranteed outright.
    bool strong_form = false;
    bool symmetry_breaking_possible = false;
    std::string alternative;
};

ContinuationCertificate continuation_certificate(const SystemSpec& spec0,
                                                 const AnalyzeOptions& opts = {});

std::string text_report(const ExistenceCertificate& cert);
std::string text_report(const ContinuationCertificate& cert);

}  // namespace perideg
