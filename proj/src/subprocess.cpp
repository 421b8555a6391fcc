#include "heulearn/subprocess.hpp"

#include <cerrno>
#include <chrono>
#include <cstring>
#include <stdexcept>

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

namespace heulearn {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void drain(int fd, std::string& sink) {
    char buf[4096];
    while (true) {
        ssize_t n = ::read(fd, buf, sizeof(buf));
        if (n > 0) {
            sink.append(buf, static_cast<std::size_t>(n));
        }
        else {
            break; // EAGAIN or EOF; poll decides what happens next
        }
    }
}

} // namespace

ProcessResult run_process(const std::vector<std::string>& argv, const ProcessLimits& limits) {
    if (argv.empty()) {
        throw std::invalid_argument("run_process: empty argv");
    }
    ProcessResult result;

    int out_pipe[2];
    int err_pipe[2];
    if (::pipe(out_pipe) != 0 || ::pipe(err_pipe) != 0) {
        throw std::runtime_error("run_process: pipe failed");
    }

    auto start = Clock::now();
    pid_t pid = ::fork();
    if (pid < 0) {
        throw std::runtime_error("run_process: fork failed");
    }
    if (pid == 0) {
        ::dup2(out_pipe[1], STDOUT_FILENO);
        ::dup2(err_pipe[1], STDERR_FILENO);
        ::close(out_pipe[0]);
        ::close(out_pipe[1]);
        ::close(err_pipe[0]);
        ::close(err_pipe[1]);
        if (limits.memory_bytes > 0) {
            rlimit rl{limits.memory_bytes, limits.memory_bytes};
            ::setrlimit(RLIMIT_AS, &rl);
        }
        std::vector<char*> args;
        args.reserve(argv.size() + 1);
        for (const std::string& a : argv) {
            args.push_back(const_cast<char*>(a.c_str()));
        }
        args.push_back(nullptr);
        ::execvp(args[0], args.data());
        ::fprintf(stderr, "exec %s: %s\n", args[0], std::strerror(errno));
        ::_exit(127);
    }

    ::close(out_pipe[1]);
    ::close(err_pipe[1]);
    ::fcntl(out_pipe[0], F_SETFL, O_NONBLOCK);
    ::fcntl(err_pipe[0], F_SETFL, O_NONBLOCK);

    bool killed = false;
    bool term_sent = false;
    int status = 0;
    while (true) {
        pollfd fds[2] = {{out_pipe[0], POLLIN, 0}, {err_pipe[0], POLLIN, 0}};
        ::poll(fds, 2, 50);
        drain(out_pipe[0], result.output);
        drain(err_pipe[0], result.error);

        pid_t done = ::waitpid(pid, &status, WNOHANG);
        if (done == pid) {
            break;
        }
        if (limits.timeout_s > 0 && seconds_since(start) >= limits.timeout_s) {
            if (!term_sent) {
                ::kill(pid, SIGTERM);
                term_sent = true;
                killed = true;
            }
            else if (seconds_since(start) >= limits.timeout_s + 2.0) {
                ::kill(pid, SIGKILL);
            }
        }
    }
    drain(out_pipe[0], result.output);
    drain(err_pipe[0], result.error);
    ::close(out_pipe[0]);
    ::close(err_pipe[0]);

    result.wall_time_s = seconds_since(start);
    result.timed_out = killed;
    if (WIFEXITED(status)) {
        result.exit_code = WEXITSTATUS(status);
        result.spawn_failed = result.exit_code == 127;
    }
    else if (WIFSIGNALED(status)) {
        result.term_signal = WTERMSIG(status);
    }
    return result;
}

} // namespace heulearn
