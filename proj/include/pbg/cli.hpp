#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pbg
{
    enum ExitCode : int
    {
        kExitOk = 0,
        kExitConfigError = 1,
        kExitNumericalError = 2,
        kExitTargetNotMet = 3,
    };

    // Entry point of the pbgsim tool. `args` excludes the program name.
    //
    //   simulate <config> [--out DIR]
    //   sweep <config> --vb LO:HI:N [--vc LO:HI:N] [--out DIR] [--threads N]
    //   search <config> --target bell|w [--vb LO:HI] [--vc LO:HI] [--out DIR]
    //   figure <id> [--out DIR] | figure --list
    int RunCommand(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace pbg
