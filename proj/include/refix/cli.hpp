#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace refix {

// Exit codes: 0 produced output, 1 usage or input problem, 2 nothing found.
int runCli(const std::vector<std::string> &args, std::istream &in, std::ostream &out,
           std::ostream &err);

// Backslash-escape newlines, tabs, and backslashes for one-line records.
std::string escapeField(const std::string &s);

} // namespace refix
