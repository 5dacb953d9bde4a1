// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "zakotfs/filters.hpp"

namespace zakotfs {

struct ValidationCase {
    std::string suite;        // "heff", "cov" or "runtime"
    std::string combination;
    std::string indices;
    cplx closed_form{};
    cplx oracle{};
    double relative_error = 0;
    double tolerance = 0;
    double closed_seconds = 0;
    double oracle_seconds = 0;
    double speedup = 0;  // runtime suite: oracle_seconds / closed_seconds
    bool passed = false;
};

struct ValidationOptions {
    std::string subset = "all";  // all | heff | cov | runtime
    int cases = 20;
    std::uint64_t seed = 7;
    int M = 12;
    int N = 14;
    double nu_p = 15000.0;
    double nu_max = 815.0;
};

std::vector<ValidationCase> run_validation(const ValidationOptions& opts);
void write_validation_report(std::ostream& os, const std::vector<ValidationCase>& cases);

}  // namespace zakotfs
