#include "cpath/bridge.hpp"

#include <csignal>
#include <cstdio>
#include <cstring>
#include <mutex>
#include <optional>
#include <sstream>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include "cpath/errors.hpp"

namespace cpath {

namespace {

using Clock = std::chrono::steady_clock;

int remaining_ms(Clock::time_point deadline) {
  const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
  return left.count() > 0 ? static_cast<int>(left.count()) : 0;
}

void write_all(int fd, const std::string& data, Clock::time_point deadline) {
  std::size_t sent = 0;
  while (sent < data.size()) {
    pollfd pfd{fd, POLLOUT, 0};
    const int ready = ::poll(&pfd, 1, remaining_ms(deadline));
    if (ready == 0) throw ModelError("bridge", "timed out writing to child");
    if (ready < 0) {
      if (errno == EINTR) continue;
      throw ModelError("bridge", std::string("poll: ") + std::strerror(errno));
    }
    const ssize_t n = ::write(fd, data.data() + sent, data.size() - sent);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw ModelError("bridge", std::string("child closed its input (") + std::strerror(errno) + ")");
    }
    sent += static_cast<std::size_t>(n);
  }
}

class LineReader {
 public:
  explicit LineReader(int fd) : fd_(fd) {}

  // Next newline-terminated line (without the newline); nullopt on EOF.
  std::optional<std::string> read_line(Clock::time_point deadline) {
    for (;;) {
      const auto pos = buffer_.find('\n');
      if (pos != std::string::npos) {
        std::string line = buffer_.substr(0, pos);
        buffer_.erase(0, pos + 1);
        return line;
      }
      pollfd pfd{fd_, POLLIN, 0};
      const int ready = ::poll(&pfd, 1, remaining_ms(deadline));
      if (ready == 0) throw ModelError("bridge", "timed out waiting for child output");
      if (ready < 0) {
        if (errno == EINTR) continue;
        throw ModelError("bridge", std::string("poll: ") + std::strerror(errno));
      }
      char chunk[4096];
      const ssize_t n = ::read(fd_, chunk, sizeof(chunk));
      if (n < 0) {
        if (errno == EINTR) continue;
        throw ModelError("bridge", std::string("read: ") + std::strerror(errno));
      }
      if (n == 0) return std::nullopt;  // EOF
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

 private:
  int fd_;
  std::string buffer_;
};

class ExternalModel : public BlackBoxModel {
 public:
  ExternalModel(pid_t pid, int to_child, int from_child, BridgeOptions options,
                std::string command)
      : pid_(pid), to_child_(to_child), from_child_(from_child), reader_(from_child),
        options_(options), command_(std::move(command)) {}

  ~ExternalModel() override {
    if (to_child_ >= 0) ::close(to_child_);  // EOF tells a well-behaved child to exit
    if (from_child_ >= 0) ::close(from_child_);
    if (pid_ > 0) {
      int status = 0;
      for (int i = 0; i < 20; ++i) {
        if (::waitpid(pid_, &status, WNOHANG) != 0) return;
        ::usleep(5000);
      }
      ::kill(pid_, SIGKILL);
      ::waitpid(pid_, &status, 0);
    }
  }

  void handshake() {
    const auto deadline = Clock::now() + options_.handshake_timeout;
    write_all(to_child_, "HELLO cpath/1\n", deadline);
    const auto line = reader_.read_line(deadline);
    if (!line)
      throw ModelError("bridge", "handshake with '" + command_ + "' failed: child exited");
    int g = 0;
    char trailing = 0;
    if (std::sscanf(line->c_str(), "OK %d%c", &g, &trailing) != 1 || g < 2)
      throw ModelError("bridge", "handshake with '" + command_ +
                                     "' failed: expected 'OK <g>' with g >= 2, got '" + *line + "'");
    g_ = g;
  }

  int n_classes() const override { return g_; }
  bool supports_concurrent_predict() const override { return false; }

  LabelVector predict(const Dataset& data) const override {
    std::lock_guard lock(mutex_);  // one in-flight request per child
    const auto deadline = Clock::now() + options_.request_timeout;

    std::ostringstream request;
    request << "PREDICT " << data.rows() << ' ' << data.cols() << '\n';
    char buf[64];
    for (std::size_t i = 0; i < data.rows(); ++i) {
      for (std::size_t j = 0; j < data.cols(); ++j) {
        if (j > 0) request << ',';
        std::snprintf(buf, sizeof(buf), "%.17g", data.at(i, j));
        request << buf;
      }
      request << '\n';
    }
    write_all(to_child_, request.str(), deadline);

    std::vector<int> labels;
    labels.reserve(data.rows());
    for (std::size_t i = 0; i < data.rows(); ++i) {
      const auto line = reader_.read_line(deadline);
      if (!line)
        throw ModelError("bridge", "child '" + command_ + "' exited mid-request (" +
                                       std::to_string(i) + " of " + std::to_string(data.rows()) +
                                       " labels received)");
      labels.push_back(parse_label(*line));
    }
    const auto trailer = reader_.read_line(deadline);
    if (!trailer) throw ModelError("bridge", "child exited before the END trailer");
    if (*trailer != "END")
      throw ModelError("bridge", "expected END trailer, got '" + *trailer + "'");
    return LabelVector(std::move(labels), g_);
  }

 private:
  int parse_label(const std::string& line) const {
    std::size_t consumed = 0;
    int label = 0;
    try {
      label = std::stoi(line, &consumed);
    } catch (const std::exception&) {
      throw ModelError("bridge", "malformed response line '" + line + "'");
    }
    if (consumed != line.size() || label < 1 || label > g_)
      throw ModelError("bridge", "malformed response line '" + line + "' (want integer in 1.." +
                                     std::to_string(g_) + ")");
    return label;
  }

  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  mutable LineReader reader_;
  int g_ = 0;
  BridgeOptions options_;
  std::string command_;
  mutable std::mutex mutex_;
};

}  // namespace

std::unique_ptr<BlackBoxModel> spawn_external_model(const std::vector<std::string>& command,
                                                    const BridgeOptions& options) {
  if (command.empty()) throw ConfigError("bridge", "empty external model command");
  ::signal(SIGPIPE, SIG_IGN);  // surface broken pipes as EPIPE instead

  int to_child[2], from_child[2], status_pipe[2];
  if (::pipe(to_child) != 0 || ::pipe(from_child) != 0 || ::pipe(status_pipe) != 0)
    throw ModelError("bridge", std::string("pipe: ") + std::strerror(errno));
  ::fcntl(status_pipe[1], F_SETFD, FD_CLOEXEC);

  const pid_t pid = ::fork();
  if (pid < 0) throw ModelError("bridge", std::string("fork: ") + std::strerror(errno));

  if (pid == 0) {
    ::dup2(to_child[0], STDIN_FILENO);
    ::dup2(from_child[1], STDOUT_FILENO);
    ::close(to_child[0]);
    ::close(to_child[1]);
    ::close(from_child[0]);
    ::close(from_child[1]);
    ::close(status_pipe[0]);

    std::vector<char*> argv;
    for (const auto& arg : command) argv.push_back(const_cast<char*>(arg.c_str()));
    argv.push_back(nullptr);
    ::execvp(argv[0], argv.data());
    const int err = errno;  // exec failed; report it through the CLOEXEC pipe
    [[maybe_unused]] ssize_t ignored = ::write(status_pipe[1], &err, sizeof(err));
    ::_exit(127);
  }

  ::close(to_child[0]);
  ::close(from_child[1]);
  ::close(status_pipe[1]);

  int exec_errno = 0;
  const ssize_t got = ::read(status_pipe[0], &exec_errno, sizeof(exec_errno));
  ::close(status_pipe[0]);

  std::string joined;
  for (const auto& arg : command) joined += (joined.empty() ? "" : " ") + arg;

  if (got > 0) {
    ::close(to_child[1]);
    ::close(from_child[0]);
    ::waitpid(pid, nullptr, 0);
    throw ModelError("bridge", "cannot start '" + joined + "': " + std::strerror(exec_errno));
  }

  // The model owns the fds and the child from here; if the handshake throws,
  // its destructor reaps the process.
  auto model = std::make_unique<ExternalModel>(pid, to_child[1], from_child[0], options, joined);
  model->handshake();
  return model;
}

}  // namespace cpath
