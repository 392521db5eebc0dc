#pragma once

#include <cstdio>
#include <string>

#include <sys/wait.h>

namespace testutil {

struct RunResult {
    int exit_code{-1};
    std::string out;
};

// Runs a shell command and captures stdout. Stderr passes through unless the
// command redirects it.
inline RunResult run_cmd(const std::string& cmd) {
    RunResult result;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return result;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) {
        result.out.append(buf, got);
    }
    const int status = pclose(pipe);
    if (WIFEXITED(status)) {
        result.exit_code = WEXITSTATUS(status);
    }
    return result;
}

}  // namespace testutil
