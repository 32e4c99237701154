#include "awf/subprocess.hpp"

#include <fcntl.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <cstring>

namespace awf {

namespace {

// In the child after fork: only async-signal-safe calls until exec.
[[noreturn]] void child_exec(const std::vector<std::string>& argv,
                             const std::map<std::string, std::string>& extra_env,
                             const char* cwd, int out_fd, int err_fd) {
    if (cwd && chdir(cwd) != 0) _exit(126);
    if (out_fd >= 0) {
        dup2(out_fd, STDOUT_FILENO);
        close(out_fd);
    }
    if (err_fd >= 0) {
        dup2(err_fd, STDERR_FILENO);
        close(err_fd);
    }
    for (const auto& [k, v] : extra_env) {
        setenv(k.c_str(), v.c_str(), 1);
    }
    std::vector<char*> cargv;
    cargv.reserve(argv.size() + 1);
    for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
    cargv.push_back(nullptr);
    execvp(cargv[0], cargv.data());
    _exit(127);
}

int wait_exit_code(pid_t pid, std::string& error) {
    int status = 0;
    while (waitpid(pid, &status, 0) < 0) {
        if (errno != EINTR) {
            error = std::string("waitpid: ") + std::strerror(errno);
            return -1;
        }
    }
    if (WIFEXITED(status)) return WEXITSTATUS(status);
    if (WIFSIGNALED(status)) {
        error = "terminated by signal " + std::to_string(WTERMSIG(status));
        return 128 + WTERMSIG(status);
    }
    error = "abnormal termination";
    return -1;
}

} // namespace

ProcessResult run_process(const std::vector<std::string>& argv,
                          const std::map<std::string, std::string>& extra_env,
                          const std::filesystem::path& cwd,
                          const std::filesystem::path& stdout_path,
                          const std::filesystem::path& stderr_path) {
    ProcessResult result;
    if (argv.empty()) {
        result.error = "empty argv";
        return result;
    }
    const int out_fd = open(stdout_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    const int err_fd = open(stderr_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    const pid_t pid = fork();
    if (pid < 0) {
        result.error = std::string("fork: ") + std::strerror(errno);
        if (out_fd >= 0) close(out_fd);
        if (err_fd >= 0) close(err_fd);
        return result;
    }
    if (pid == 0) {
        child_exec(argv, extra_env, cwd.empty() ? nullptr : cwd.c_str(), out_fd, err_fd);
    }
    if (out_fd >= 0) close(out_fd);
    if (err_fd >= 0) close(err_fd);
    result.launched = true;
    result.exit_code = wait_exit_code(pid, result.error);
    return result;
}

CaptureResult run_capture(const std::vector<std::string>& argv,
                          const std::filesystem::path& cwd) {
    CaptureResult result;
    if (argv.empty()) {
        result.error = "empty argv";
        return result;
    }
    int fds[2];
    if (pipe(fds) != 0) {
        result.error = std::string("pipe: ") + std::strerror(errno);
        return result;
    }
    const pid_t pid = fork();
    if (pid < 0) {
        result.error = std::string("fork: ") + std::strerror(errno);
        close(fds[0]);
        close(fds[1]);
        return result;
    }
    if (pid == 0) {
        close(fds[0]);
        child_exec(argv, {}, cwd.empty() ? nullptr : cwd.c_str(), fds[1], -1);
    }
    close(fds[1]);
    char buf[4096];
    ssize_t n;
    while ((n = read(fds[0], buf, sizeof(buf))) > 0) {
        result.output.append(buf, std::size_t(n));
    }
    close(fds[0]);
    result.launched = true;
    result.exit_code = wait_exit_code(pid, result.error);
    return result;
}

} // namespace awf
