// Copyright 2026 The clssmt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Driving an SMT-LIB 2.6 solver as a child process over stdin/stdout, reading
// models back with batched (get-value ...), and enumerating distinct
// verified terms with blocking clauses.  POSIX only.

#pragma once

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "clssmt/error.hpp"
#include "clssmt/grammar.hpp"
#include "clssmt/sexpr.hpp"
#include "clssmt/smt.hpp"

namespace clssmt {

inline constexpr const char* kSolverEnvVar = "CLSSMT_SOLVER";
inline constexpr const char* kDefaultSolver = "z3 -in";

struct SolverConfig {
  std::vector<std::string> command;
  double timeout_seconds = 60.0;
  std::size_t value_query_batch = 64;
  /// Keep the script loaded and add blocking clauses incrementally instead
  /// of resetting and re-sending everything for each model.
  bool incremental = false;

  static std::vector<std::string> split_command(std::string_view text) {
    std::vector<std::string> out;
    std::istringstream in{std::string(text)};
    for (std::string w; in >> w;) out.push_back(w);
    return out;
  }

  /// `CLSSMT_SOLVER` if set, otherwise `z3 -in`.
  static SolverConfig from_environment() {
    SolverConfig c;
    const char* env = std::getenv(kSolverEnvVar);
    c.command = split_command(env && *env ? env : kDefaultSolver);
    return c;
  }
};

/// Resolves an executable the way execvp would; nullopt if absent.
inline std::optional<std::filesystem::path> find_executable(const std::string& name) {
  namespace fs = std::filesystem;
  if (name.find('/') != std::string::npos) {
    if (::access(name.c_str(), X_OK) == 0) return fs::path(name);
    return std::nullopt;
  }
  const char* path = std::getenv("PATH");
  std::istringstream dirs(path ? path : "/usr/local/bin:/usr/bin:/bin");
  for (std::string dir; std::getline(dirs, dir, ':');) {
    fs::path candidate = fs::path(dir.empty() ? "." : dir) / name;
    if (::access(candidate.c_str(), X_OK) == 0 && fs::is_regular_file(candidate))
      return candidate;
  }
  return std::nullopt;
}

inline bool solver_available(const SolverConfig& cfg) {
  return !cfg.command.empty() && find_executable(cfg.command[0]).has_value();
}

/// Raised internally when a solver interaction exceeds its deadline.
class SolverTimeout : public SolverError {
 public:
  using SolverError::SolverError;
};

// ---------------------------------------------------------------------------
// Child process

class SolverProcess {
 public:
  using Clock = std::chrono::steady_clock;

  explicit SolverProcess(const std::vector<std::string>& command) {
    if (command.empty()) throw SolverError("empty solver command");
    ::signal(SIGPIPE, SIG_IGN);
    int in[2], out[2];
    if (::pipe(in) != 0 || ::pipe(out) != 0)
      throw SolverError(std::string("pipe: ") + std::strerror(errno));
    pid_ = ::fork();
    if (pid_ < 0) throw SolverError(std::string("fork: ") + std::strerror(errno));
    if (pid_ == 0) {
      ::dup2(in[0], STDIN_FILENO);
      ::dup2(out[1], STDOUT_FILENO);
      ::dup2(out[1], STDERR_FILENO);
      ::close(in[0]);
      ::close(in[1]);
      ::close(out[0]);
      ::close(out[1]);
      std::vector<char*> argv;
      for (const auto& a : command) argv.push_back(const_cast<char*>(a.c_str()));
      argv.push_back(nullptr);
      ::execvp(argv[0], argv.data());
      const char msg[] = "(error \"cannot execute solver\")\n";
      [[maybe_unused]] auto n = ::write(STDOUT_FILENO, msg, sizeof msg - 1);
      ::_exit(127);
    }
    ::close(in[0]);
    ::close(out[1]);
    to_child_ = in[1];
    from_child_ = out[0];
    ::fcntl(to_child_, F_SETFL, ::fcntl(to_child_, F_GETFL) | O_NONBLOCK);
    ::fcntl(from_child_, F_SETFL, ::fcntl(from_child_, F_GETFL) | O_NONBLOCK);
  }

  SolverProcess(const SolverProcess&) = delete;
  SolverProcess& operator=(const SolverProcess&) = delete;

  ~SolverProcess() { terminate(); }

  void terminate() {
    if (to_child_ >= 0) ::close(to_child_);
    if (from_child_ >= 0) ::close(from_child_);
    to_child_ = from_child_ = -1;
    if (pid_ > 0) {
      ::kill(pid_, SIGKILL);
      int status = 0;
      ::waitpid(pid_, &status, 0);
      pid_ = -1;
    }
  }

  /// Writes all of `text`, draining the child's output meanwhile so neither
  /// side can block on a full pipe.
  void send(std::string_view text, Clock::time_point deadline) {
    std::size_t done = 0;
    while (done < text.size()) {
      pollfd fds[2] = {{to_child_, POLLOUT, 0}, {from_child_, POLLIN, 0}};
      wait(fds, 2, deadline);
      if (fds[1].revents & (POLLIN | POLLHUP)) drain();
      if (fds[0].revents & (POLLERR | POLLHUP))
        throw SolverError("solver closed its input; output so far: " + excerpt());
      if (fds[0].revents & POLLOUT) {
        ssize_t n = ::write(to_child_, text.data() + done, text.size() - done);
        if (n < 0) {
          if (errno == EAGAIN || errno == EINTR) continue;
          throw SolverError(std::string("write to solver: ") + std::strerror(errno) +
                            "; output so far: " + excerpt());
        }
        done += static_cast<std::size_t>(n);
      }
    }
  }

  /// Next complete s-expression from the child.
  SExpr read(Clock::time_point deadline) {
    while (true) {
      if (auto len = complete_sexpr_length(buffer_)) {
        std::string chunk = buffer_.substr(0, *len);
        buffer_.erase(0, *len);
        return parse_sexpr(trim_ws(chunk));
      }
      if (eof_) {
        // A trailing atom is complete at end of stream.
        std::string rest = trim_ws(buffer_);
        buffer_.clear();
        if (!rest.empty() && rest[0] != '(') return parse_sexpr(rest);
        throw SolverError("solver exited unexpectedly" +
                          (rest.empty() ? std::string() : ": " + rest));
      }
      pollfd fd{from_child_, POLLIN, 0};
      wait(&fd, 1, deadline);
      drain();
    }
  }

 private:
  static std::string trim_ws(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  }

  void wait(pollfd* fds, nfds_t n, Clock::time_point deadline) {
    while (true) {
      auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                      deadline - Clock::now())
                      .count();
      if (left <= 0) throw SolverTimeout("solver timed out");
      int r = ::poll(fds, n, static_cast<int>(std::min<long long>(left, 1 << 30)));
      if (r > 0) return;
      if (r < 0 && errno != EINTR)
        throw SolverError(std::string("poll: ") + std::strerror(errno));
    }
  }

  void drain() {
    char buf[65536];
    while (true) {
      ssize_t n = ::read(from_child_, buf, sizeof buf);
      if (n > 0) {
        buffer_.append(buf, static_cast<std::size_t>(n));
        continue;
      }
      if (n == 0) eof_ = true;
      return;  // EOF, EAGAIN or error
    }
  }

  std::string excerpt() const { return buffer_.substr(0, 400); }

  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
  bool eof_ = false;
};

// ---------------------------------------------------------------------------
// Solving

struct SolveOutcome {
  enum class Status { Sat, Unsat, Unknown, SolverError };
  Status status = Status::Unknown;
  VertexLayout layout;                         // Sat: inhabitant values
  std::map<std::uint64_t, std::int64_t> types;  // Sat: ty values
  std::string reason;                          // Unknown / SolverError

  bool sat() const { return status == Status::Sat; }
};

inline std::string to_string(SolveOutcome::Status s) {
  switch (s) {
    case SolveOutcome::Status::Sat: return "sat";
    case SolveOutcome::Status::Unsat: return "unsat";
    case SolveOutcome::Status::Unknown: return "unknown";
    case SolveOutcome::Status::SolverError: return "error";
  }
  return "?";
}

/// One solver process.  Statements are sent as text; check() runs
/// (check-sat) and, on sat, reads `inhabitant` and `ty` at `probe`.
class SolverSession {
 public:
  explicit SolverSession(const SolverConfig& cfg) : cfg_(cfg), proc_(cfg.command) {}

  void send(std::string_view text) { proc_.send(text, deadline()); }

  SolveOutcome check(const std::vector<std::uint64_t>& probe) {
    SolveOutcome out;
    try {
      proc_.send("(check-sat)\n", deadline());
      SExpr answer = proc_.read(deadline());
      if (answer.is_atom("unsat")) {
        out.status = SolveOutcome::Status::Unsat;
      } else if (answer.is_atom("unknown")) {
        out.status = SolveOutcome::Status::Unknown;
        out.reason = "solver answered unknown";
      } else if (answer.is_atom("sat")) {
        out.status = SolveOutcome::Status::Sat;
        read_values("inhabitant", probe, out.layout);
        read_values("ty", probe, out.types);
      } else {
        out.status = SolveOutcome::Status::SolverError;
        out.reason = answer.str().substr(0, 400);
      }
    } catch (const SolverTimeout&) {
      proc_.terminate();
      out.status = SolveOutcome::Status::Unknown;
      out.reason = "timeout";
    } catch (const SolverError& e) {
      proc_.terminate();
      out.status = SolveOutcome::Status::SolverError;
      out.reason = e.what();
    }
    return out;
  }

 private:
  SolverProcess::Clock::time_point deadline() const {
    return SolverProcess::Clock::now() +
           std::chrono::milliseconds(static_cast<long long>(cfg_.timeout_seconds * 1000));
  }

  void read_values(const char* fn, const std::vector<std::uint64_t>& probe,
                   std::map<std::uint64_t, std::int64_t>& into) {
    std::size_t batch = std::max<std::size_t>(1, cfg_.value_query_batch);
    for (std::size_t b = 0; b < probe.size(); b += batch) {
      std::string q = "(get-value (";
      std::size_t e = std::min(probe.size(), b + batch);
      for (std::size_t k = b; k < e; ++k)
        q += "(" + std::string(fn) + " " + std::to_string(probe[k]) + ") ";
      q += "))\n";
      proc_.send(q, deadline());
      SExpr r = proc_.read(deadline());
      if (!r.is_list || r.items.size() != e - b)
        throw SolverError("unexpected get-value response: " + r.str().substr(0, 400));
      for (const auto& pair : r.items) {
        if (!pair.is_list || pair.items.size() != 2 || !pair.items[0].is_list ||
            pair.items[0].items.size() != 2)
          throw SolverError("unexpected get-value entry: " + pair.str());
        std::int64_t vertex = sexpr_to_int(pair.items[0].items[1]);
        into[static_cast<std::uint64_t>(vertex)] = sexpr_to_int(pair.items[1]);
      }
    }
  }

  SolverConfig cfg_;
  SolverProcess proc_;
};

/// Runs `script` once.  Values are read at the script's instantiated
/// vertices, or at `probe` when given (required for quantified scripts if a
/// model is wanted).
inline SolveOutcome solve(const SmtScript& script, const SolverConfig& cfg,
                          const std::vector<std::uint64_t>& probe = {}) {
  try {
    SolverSession session(cfg);
    session.send(script.body());
    return session.check(probe.empty() ? script.vertices : probe);
  } catch (const SolverTimeout&) {
    return {SolveOutcome::Status::Unknown, {}, {}, "timeout"};
  } catch (const SolverError& e) {
    return {SolveOutcome::Status::SolverError, {}, {}, e.what()};
  }
}

// ---------------------------------------------------------------------------
// Decoding

struct Decoded {
  std::optional<Term> term;     // set iff accepted
  VertexLayout region;          // reached vertices with their labels
  std::string diagnostic;       // why it was rejected
};

/// Walks the model from the root along application nodes, rebuilds the term
/// and accepts it iff it is a word of `goal`.  Labels off the walked region
/// are ignored.  A walk that leaves the read-back vertices or meets an
/// invalid label is rejected; `region` then holds what was reached.
inline Decoded decode_and_verify(const SolveOutcome& outcome, const TreeGrammar& g,
                                 const std::string& goal, const Tables& tables) {
  Decoded d;
  if (!outcome.sat()) {
    d.diagnostic = "no model (" + to_string(outcome.status) + ")";
    return d;
  }
  std::vector<std::uint64_t> work{1};
  while (!work.empty()) {
    std::uint64_t v = work.back();
    work.pop_back();
    auto it = outcome.layout.find(v);
    if (it == outcome.layout.end()) {
      d.diagnostic = "term leaves the instantiated vertices at " + std::to_string(v);
      return d;
    }
    d.region.emplace(v, it->second);
    if (it->second == 0) {
      work.push_back(right_child(v));
      work.push_back(left_child(v));
    } else if (!tables.combinators.has_index(it->second)) {
      d.diagnostic = "vertex " + std::to_string(v) + " has invalid label " +
                     std::to_string(it->second);
      return d;
    }
  }
  Term t;
  try {
    t = delayout(d.region, tables.combinators);
  } catch (const MalformedTree& e) {
    d.diagnostic = e.what();
    return d;
  }
  if (!member(g, goal, t)) {
    d.diagnostic = "decoded term " + to_sexpr(t) + " is not a word of " + goal;
    return d;
  }
  d.term = std::move(t);
  return d;
}

inline std::string blocking_clause(const VertexLayout& region) {
  std::string out = "(assert (not (and";
  for (const auto& [v, label] : region)
    out += " " + inhabitant_eq(Address::vertex(v), label);
  return out + ")))";
}

struct Enumeration {
  std::vector<Term> terms;
  std::size_t rejected = 0;  // models that did not decode to a word
  SolveOutcome::Status final_status = SolveOutcome::Status::Unsat;
  std::string reason;   // for Unknown / SolverError
  double solver_seconds = 0;

  /// True when the model space was exhausted (the last check was unsat).
  bool complete() const { return final_status == SolveOutcome::Status::Unsat; }
};

/// Collects up to `k` distinct words: solve, decode and verify, block the
/// model's occupied vertices, repeat until `k` terms or no further model.
inline Enumeration enumerate_solutions(const SmtScript& script, const TreeGrammar& g,
                                       const std::string& goal, const Tables& tables,
                                       const SolverConfig& cfg, std::size_t k) {
  if (script.mode != Mode::Finitized)
    throw ValidationError("solution enumeration needs a finitized script");
  Enumeration result;
  if (k == 0) {
    result.final_status = SolveOutcome::Status::Sat;
    return result;
  }
  auto started = std::chrono::steady_clock::now();
  std::vector<std::string> blocks;
  std::set<Term> seen;
  try {
    SolverSession session(cfg);
    if (cfg.incremental) session.send(script.body());
    while (result.terms.size() < k) {
      if (!cfg.incremental) {
        std::string all = "(reset)\n" + script.body();
        for (const auto& b : blocks) all += b + "\n";
        session.send(all);
      }
      SolveOutcome out = session.check(script.vertices);
      if (!out.sat()) {
        result.final_status = out.status;
        result.reason = out.reason;
        break;
      }
      Decoded d = decode_and_verify(out, g, goal, tables);
      if (d.term && seen.insert(*d.term).second)
        result.terms.push_back(*d.term);
      else
        ++result.rejected;
      if (d.region.empty()) throw SolverError("model has no root label");
      std::string block = blocking_clause(d.region);
      blocks.push_back(block);
      if (cfg.incremental) session.send(block + "\n");
      if (result.terms.size() == k) result.final_status = SolveOutcome::Status::Sat;
    }
  } catch (const SolverTimeout&) {
    result.final_status = SolveOutcome::Status::Unknown;
    result.reason = "timeout";
  }
  result.solver_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  if (result.final_status == SolveOutcome::Status::SolverError)
    throw SolverError(result.reason);
  return result;
}

}  // namespace clssmt
