#pragma once

// Real projective zeros of a sample: exact counting by Sturm sequences and
// certified localization by grid bracketing with Hermite error bounds.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "kostlan/core.hpp"

namespace kostlan {

enum class RootMethod { sturm_exact, bracket_refine };

std::string_view to_string(RootMethod m);

struct RootSet {
    int degree = 0;
    int count = 0;
    /// Sorted angles in [0, pi); present only when localization was requested.
    std::optional<std::vector<double>> angles;
    RootMethod method = RootMethod::bracket_refine;
};

/// The bracketing count and the exact count disagree after every refinement.
class RootCountMismatch : public std::runtime_error {
public:
    RootCountMismatch(int bracket_count, int exact_count);
    int bracket_count() const { return bracket_count_; }
    int exact_count() const { return exact_count_; }

private:
    int bracket_count_;
    int exact_count_;
};

/// Roots cannot be separated at double resolution.
class RootLocalizationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ExactCheck {
    never,
    always,
    /// Cross-check against Sturm only for d <= kAutoExactMaxDegree.
    automatic,
};

struct LocateOptions {
    ExactCheck exact_check = ExactCheck::automatic;
    /// Grid cells per unit degree on [0, pi); the initial spacing is pi / (grid_factor d).
    int grid_factor = 8;
    /// Grid doublings tried when the bracketing count disagrees with Sturm.
    int max_refinements = 3;
};

inline constexpr int kAutoExactMaxDegree = 32;

/// Exact count of distinct projective roots (Sturm over dyadic rationals).
RootSet count_roots_exact(const KostlanSample& s);

/// Root angles by exact Sturm isolation to absolute accuracy tol.
RootSet isolate_roots_exact(const KostlanSample& s, double tol);

/// Certified count without polishing (bracketing; Sturm on unresolved cells).
RootSet count_roots(const KostlanSample& s, const LocateOptions& opts = {});

/// All root angles to absolute accuracy tol, tol in (1e-14, 1e-3).
RootSet locate_roots(const KostlanSample& s, double tol, const LocateOptions& opts = {});

/// Number of angles of rs in [a, b), 0 <= a < b <= pi.
int count_in_window(const RootSet& rs, double a, double b);

}  // namespace kostlan
