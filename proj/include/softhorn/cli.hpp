#pragma once

#include <string>
#include <vector>

namespace softhorn::cli {

// exit codes: 0 ok, 2 parse/validation error, 3 enumeration budget
// exceeded, 4 dataset/prediction id mismatch, 1 anything else
inline constexpr int kOk = 0;
inline constexpr int kParseError = 2;
inline constexpr int kBudgetError = 3;
inline constexpr int kIdMismatch = 4;

int run(const std::vector<std::string>& args);
int run(int argc, char** argv);

}  // namespace softhorn::cli
