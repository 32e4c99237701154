#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace awf {

struct ProcessResult {
    bool launched = false;
    int exit_code = -1;
    std::string error; // set when not launched or abnormal termination
};

// Runs argv as a child process: cwd set, extra environment merged over the
// parent's, stdout/stderr redirected to files. No shell interpretation.
ProcessResult run_process(const std::vector<std::string>& argv,
                          const std::map<std::string, std::string>& extra_env,
                          const std::filesystem::path& cwd,
                          const std::filesystem::path& stdout_path,
                          const std::filesystem::path& stderr_path);

struct CaptureResult {
    bool launched = false;
    int exit_code = -1;
    std::string output; // child stdout
    std::string error;
};

CaptureResult run_capture(const std::vector<std::string>& argv,
                          const std::filesystem::path& cwd);

} // namespace awf
