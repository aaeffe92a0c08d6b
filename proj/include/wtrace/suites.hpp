#pragma once

#include <string>
#include <vector>

#include "wtrace/report.hpp"

namespace wtrace {

// norms, dyadic, hardy, extension, trace-f, trace-b, sobolev, mixed, counterexample, semigroup, stefan
const std::vector<std::string>& suite_names();

// Throws "unknown suite" for other names and "missing baseline" in check mode without one.
VerificationReport run_suite(const std::string& name, const RunConfig& cfg, BaselineMode mode);

}  // namespace wtrace
