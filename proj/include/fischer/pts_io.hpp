#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "fischer/triple_system.hpp"

namespace fischer {

struct PtsParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Text format: header "pts v1 <n_points>", then '#' comment lines and data
// lines of three ascending 0-based point indices separated by single spaces.
// A trailing newline is required. Emission is canonical (sorted triples), so
// emit -> parse -> emit with the same comments is byte-identical.
std::string write_pts(const TripleSystem& s,
                      const std::vector<std::string>& comments = {});

struct PtsFile {
    TripleSystem system;
    std::vector<std::string> comments;  // without the leading "# "
};

PtsFile read_pts_full(const std::string& text);
TripleSystem read_pts(const std::string& text);

void write_pts_file(const std::string& path, const TripleSystem& s,
                    const std::vector<std::string>& comments = {});
PtsFile read_pts_file(const std::string& path);

}  // namespace fischer
