#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace trajlab {

// Exit codes: 0 when every requested verdict holds (or nothing is checked),
// 1 when a verdict or certification fails, 2 on usage and runtime errors.
int run_command(const std::vector<std::string>& args, std::ostream& out = std::cout,
                std::ostream& err = std::cerr);

}  // namespace trajlab
