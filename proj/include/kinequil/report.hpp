#pragma once

#include <string>
#include <utility>
#include <vector>

#include "kinequil/numerics.hpp"

namespace kinequil::report {

/// One inequality (or identity-threshold) verdict. Margins are signed:
/// margin >= 0 means the check holds, negative means violation. Vacuum or
/// otherwise inapplicable checks are flagged trivial and count as passed.
struct CheckResult {
    std::string name;
    double margin = 0.0;
    bool passed = true;
    bool trivial = false;
};

struct GridMeta {
    std::size_t nodes = 0;
    double r_eps = 0.0;
    double r_max = 0.0;
};

struct VirialReport {
    std::string model;
    std::vector<std::pair<std::string, double>> residuals;
    std::vector<CheckResult> checks;
    std::vector<std::pair<std::string, double>> values;  // invariants (H, M, ...)
    numerics::Tolerances tol;
    GridMeta grid;

    bool all_passed() const;
    void add_check(std::string name, double margin, bool trivial = false);
    void add_trivial(std::string name);
    double value(const std::string& name) const;  // NaN when absent
};

/// One converged scan point. Fixed column set shared by the CSV contract.
struct ScanRow {
    double param = 0;
    double Zc = 0;
    double H = 0;
    double M = 0;
    double binding = 0;
    double R1 = 0;
    double R2 = 0;
    double E0 = 0;
    double virial_residual = 0;
    double buchdahl_sup = 0;
    bool checks_passed = true;
    std::vector<std::pair<std::string, double>> margins;
};

struct ScanFailure {
    double param = 0;
    std::string code;
};

struct ScanResult {
    std::vector<ScanRow> rows;       // sorted by param, converged builds only
    std::vector<ScanFailure> failures;
    int argmax_binding = -1;         // index into rows, -1 when empty
};

}  // namespace kinequil::report
