#include "kinequil/report.hpp"

#include <cmath>
#include <limits>

namespace kinequil::report {

bool VirialReport::all_passed() const {
    for (const auto& c : checks)
        if (!c.passed && !c.trivial) return false;
    return true;
}

void VirialReport::add_check(std::string name, double margin, bool trivial) {
    checks.push_back({std::move(name), margin, trivial || margin >= 0.0, trivial});
}

void VirialReport::add_trivial(std::string name) {
    checks.push_back({std::move(name), 0.0, true, true});
}

double VirialReport::value(const std::string& name) const {
    for (const auto& [k, v] : values)
        if (k == name) return v;
    return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace kinequil::report
