#ifndef PAIRLABEL_ANNOTATE_SESSION_H_
#define PAIRLABEL_ANNOTATE_SESSION_H_

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "pairlabel/labeler.h"
#include "pairlabel/types.h"

// Human-in-the-loop labeling. A session runs the labeling pipeline on a
// driver thread whose oracle suspends on every comparison until an annotator
// answers it. At most one query is pending per session.
namespace pairlabel::annotate {

enum class SessionState { kReady, kAwaitingAnswer, kFinished, kFailed };
std::string_view ToString(SessionState state);

enum class Choice { kLeft, kRight };
constexpr Sign ToSign(Choice c) {
  return c == Choice::kLeft ? Sign::kPlus : Sign::kMinus;
}
Choice ParseChoice(std::string_view text);
std::string_view ToString(Choice c);

struct SessionParams {
  std::string dataset = "default";
  LabelingParams labeling{3, 1, DelegationPolicy::kRandomLabels, std::nullopt};
  std::uint64_t seed = 0;
  // Name of the positive class shown in prompts.
  std::string positive_class = "positive";
};

// One answered comparison. Stored as a JSON line in the session's answer log.
struct LogEntry {
  std::uint64_t query_id = 0;
  OracleKind kind = OracleKind::kAmbiguity;
  PointId left = 0;
  PointId right = 0;
  Choice choice = Choice::kLeft;
  std::string timestamp;

  std::string ToJsonLine() const;
  static LogEntry FromJsonLine(const std::string& line);
};

struct PendingQuery {
  ComparisonQuery query;
  std::size_t answered = 0;
  std::uint64_t estimated_total = 0;
};

// What an annotator sees next: a pending query, or none when the session has
// finished (or failed, with `error` set).
struct NextQuery {
  SessionState state = SessionState::kReady;
  std::optional<PendingQuery> pending;
  std::string error;
};

enum class SubmitStatus { kAccepted, kConflict, kFinished };

struct SubmitResult {
  SubmitStatus status = SubmitStatus::kAccepted;
  std::size_t answered = 0;
  SessionState state = SessionState::kReady;
  std::string message;
};

struct SessionResult {
  LabelSet labels;
  OracleStats stats;
};

// Upper estimate of the queries a session will ask.
std::uint64_t EstimateTotalQueries(std::size_t n, const LabelingParams& params);

class Session {
 public:
  using AnswerSink = std::function<void(const LogEntry&)>;

  // `replay` answers are consumed first, in order, and must match the
  // queries the driver asks; a mismatch fails the session. `sink` receives
  // every new answer before the driver sees it. It runs under the session
  // lock and must not call back into the session. `answer_timeout` bounds how
  // long the driver waits for an annotator (unset: forever).
  Session(std::string id, std::shared_ptr<const Dataset> data,
          SessionParams params, std::vector<LogEntry> replay = {},
          AnswerSink sink = {},
          std::optional<std::chrono::milliseconds> answer_timeout = {});
  ~Session();

  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  const std::string& id() const { return id_; }
  const SessionParams& params() const { return params_; }
  const Dataset& data() const { return *data_; }

  // Waits (bounded by `settle`) until the driver has either posted a query or
  // stopped, then reports it. Repeated calls return the same query.
  NextQuery Next(std::chrono::milliseconds settle = std::chrono::seconds(10));

  // Accepts `choice` iff `query_id` is the pending query, then waits (bounded
  // by `settle`) for the driver to post the next query or finish.
  SubmitResult Submit(std::uint64_t query_id, Choice choice,
                      std::chrono::milliseconds settle = std::chrono::seconds(10));

  std::optional<SessionResult> Result() const;
  SessionState state() const;
  std::size_t answered() const;
  std::vector<LogEntry> log() const;

 private:
  class BridgeOracle;
  struct Cancelled {};

  void Drive();
  Sign Ask(OracleKind kind, const DataPoint& left, const DataPoint& right);
  void WaitSettled(std::unique_lock<std::mutex>& lock,
                   std::chrono::milliseconds settle);

  const std::string id_;
  const std::shared_ptr<const Dataset> data_;
  const SessionParams params_;
  const AnswerSink sink_;
  const std::optional<std::chrono::milliseconds> answer_timeout_;
  const std::uint64_t estimated_total_;

  mutable std::mutex mu_;
  std::condition_variable cv_;
  SessionState state_ = SessionState::kReady;
  std::optional<ComparisonQuery> pending_;
  std::optional<Sign> answer_;
  std::vector<LogEntry> replay_;
  std::size_t replay_pos_ = 0;
  std::vector<LogEntry> log_;
  std::uint64_t next_query_id_ = 0;
  std::size_t answered_ = 0;
  std::optional<SessionResult> result_;
  std::string error_;
  bool cancelled_ = false;

  std::thread driver_;
};

// Runs the pipeline offline, answering from a recorded log. Throws
// std::runtime_error when the log does not match the queries asked or runs
// out before the pipeline finishes.
SessionResult ReplayLog(const Dataset& data, const SessionParams& params,
                        const std::vector<LogEntry>& log);

struct ManagerOptions {
  // Where session metadata and answer logs live; nothing is persisted when
  // unset.
  std::optional<std::filesystem::path> sessions_dir;
  std::optional<std::chrono::milliseconds> answer_timeout;
};

// Owns datasets and sessions. Thread-safe.
class SessionManager {
 public:
  explicit SessionManager(ManagerOptions options = {});

  void AddDataset(const std::string& name, Dataset data);
  bool HasDataset(const std::string& name) const;

  // Validates the parameters against the dataset and starts a session.
  // Throws ParameterError or ConfigError.
  std::string Create(const SessionParams& params);
  std::shared_ptr<Session> Find(const std::string& id) const;
  std::vector<std::string> Ids() const;

  // Restarts every session found in sessions_dir by replaying its answer
  // log. Returns the number resumed.
  std::size_t ResumeAll();

 private:
  std::shared_ptr<Session> Start(const std::string& id,
                                 const SessionParams& params,
                                 std::vector<LogEntry> replay);
  std::string NewId();

  ManagerOptions options_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<const Dataset>> datasets_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
};

std::string SessionParamsToJson(const SessionParams& params);
SessionParams SessionParamsFromJson(const std::string& json);

}  // namespace pairlabel::annotate

#endif  // PAIRLABEL_ANNOTATE_SESSION_H_
