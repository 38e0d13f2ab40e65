#include "pairlabel/annotate/session.h"

#include <algorithm>
#include <ctime>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "pairlabel/errors.h"
#include "pairlabel/rng.h"
#include "pairlabel/topt.h"

namespace pairlabel::annotate {
namespace {

using nlohmann::json;

std::string UtcTimestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t secs = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

bool Matches(const LogEntry& e, const ComparisonQuery& q) {
  return e.query_id == q.query_id && e.kind == q.kind && e.left == q.left &&
         e.right == q.right;
}

std::string Describe(const ComparisonQuery& q) {
  return "query " + std::to_string(q.query_id) + " (" +
         std::string(ToString(q.kind)) + " " + std::to_string(q.left) + " vs " +
         std::to_string(q.right) + ")";
}

// Answers from a recorded log; used for offline replay.
class LogOracle : public ComparisonOracle {
 public:
  explicit LogOracle(const std::vector<LogEntry>& log) : log_(log) {}

  Sign Compare(OracleKind kind, const DataPoint& left,
               const DataPoint& right) override {
    const ComparisonQuery q{next_id_++, kind, left.id, right.id};
    if (pos_ >= log_.size()) {
      throw std::runtime_error("answer log ends before " + Describe(q));
    }
    const LogEntry& e = log_[pos_++];
    if (!Matches(e, q)) {
      throw std::runtime_error("answer log entry " + std::to_string(pos_ - 1) +
                               " does not match " + Describe(q));
    }
    return ToSign(e.choice);
  }

 private:
  const std::vector<LogEntry>& log_;
  std::size_t pos_ = 0;
  std::uint64_t next_id_ = 0;
};

}  // namespace

std::string_view ToString(SessionState state) {
  switch (state) {
    case SessionState::kReady:
      return "ready";
    case SessionState::kAwaitingAnswer:
      return "awaiting_answer";
    case SessionState::kFinished:
      return "finished";
    case SessionState::kFailed:
      return "failed";
  }
  return "unknown";
}

Choice ParseChoice(std::string_view text) {
  if (text == "left") return Choice::kLeft;
  if (text == "right") return Choice::kRight;
  throw ParameterError("choice must be 'left' or 'right'");
}

std::string_view ToString(Choice c) {
  return c == Choice::kLeft ? "left" : "right";
}

std::string LogEntry::ToJsonLine() const {
  json j = {{"query_id", query_id},
            {"kind", ToString(kind)},
            {"left", left},
            {"right", right},
            {"choice", ToString(choice)},
            {"timestamp", timestamp}};
  return j.dump();
}

LogEntry LogEntry::FromJsonLine(const std::string& line) {
  try {
    const json j = json::parse(line);
    LogEntry e;
    e.query_id = j.at("query_id").get<std::uint64_t>();
    e.kind = ParseOracleKind(j.at("kind").get<std::string>());
    e.left = j.at("left").get<PointId>();
    e.right = j.at("right").get<PointId>();
    e.choice = ParseChoice(j.at("choice").get<std::string>());
    e.timestamp = j.value("timestamp", "");
    return e;
  } catch (const json::exception& ex) {
    throw DataError(std::string("bad answer log line: ") + ex.what());
  }
}

std::uint64_t EstimateTotalQueries(std::size_t n, const LabelingParams& params) {
  std::uint64_t total = 0;
  std::size_t pool = n;
  std::size_t t = params.t;
  while (pool > 2 && t >= 1 && t < pool) {
    const std::size_t voters = std::min(params.VotersPerPoint(), t);
    total += SelectionQueryBound(pool, t, params.m) + voters * (pool - t);
    if (params.delegation_policy != DelegationPolicy::kRecurse) break;
    pool = t;
    t = std::min(params.t, (pool + 1) / 2);
  }
  return total;
}

class Session::BridgeOracle : public ComparisonOracle {
 public:
  explicit BridgeOracle(Session& session) : session_(session) {}
  Sign Compare(OracleKind kind, const DataPoint& left,
               const DataPoint& right) override {
    return session_.Ask(kind, left, right);
  }

 private:
  Session& session_;
};

Session::Session(std::string id, std::shared_ptr<const Dataset> data,
                 SessionParams params, std::vector<LogEntry> replay,
                 AnswerSink sink,
                 std::optional<std::chrono::milliseconds> answer_timeout)
    : id_(std::move(id)),
      data_(std::move(data)),
      params_(std::move(params)),
      sink_(std::move(sink)),
      answer_timeout_(answer_timeout),
      estimated_total_(EstimateTotalQueries(data_->size(), params_.labeling)),
      replay_(std::move(replay)) {
  params_.labeling.Validate(data_->size());
  driver_ = std::thread(&Session::Drive, this);
}

Session::~Session() {
  {
    std::lock_guard lock(mu_);
    cancelled_ = true;
  }
  cv_.notify_all();
  if (driver_.joinable()) driver_.join();
}

void Session::Drive() {
  Rng rng = Rng(params_.seed).Fork(streams::kAlgorithm);
  BridgeOracle oracle(*this);
  try {
    LabelSet labels = InferLabels(*data_, params_.labeling, oracle, rng);
    std::lock_guard lock(mu_);
    const OracleStats stats = labels.queries;
    result_ = SessionResult{std::move(labels), stats};
    pending_.reset();
    state_ = SessionState::kFinished;
  } catch (const Cancelled&) {
    return;
  } catch (const std::exception& e) {
    std::lock_guard lock(mu_);
    pending_.reset();
    error_ = e.what();
    state_ = SessionState::kFailed;
  }
  cv_.notify_all();
}

Sign Session::Ask(OracleKind kind, const DataPoint& left,
                  const DataPoint& right) {
  std::unique_lock lock(mu_);
  if (cancelled_) throw Cancelled{};
  const ComparisonQuery query{next_query_id_++, kind, left.id, right.id};
  if (replay_pos_ < replay_.size()) {
    const LogEntry& e = replay_[replay_pos_++];
    if (!Matches(e, query)) {
      throw std::runtime_error("answer log does not match " + Describe(query));
    }
    log_.push_back(e);
    ++answered_;
    return ToSign(e.choice);
  }
  pending_ = query;
  state_ = SessionState::kAwaitingAnswer;
  cv_.notify_all();
  const auto answered = [this] { return answer_.has_value() || cancelled_; };
  if (answer_timeout_) {
    if (!cv_.wait_for(lock, *answer_timeout_, answered)) {
      throw std::runtime_error("no answer to " + Describe(query) +
                               " within the driver timeout");
    }
  } else {
    cv_.wait(lock, answered);
  }
  if (cancelled_) throw Cancelled{};
  const Sign answer = *answer_;
  answer_.reset();
  return answer;
}

void Session::WaitSettled(std::unique_lock<std::mutex>& lock,
                          std::chrono::milliseconds settle) {
  cv_.wait_for(lock, settle, [this] { return state_ != SessionState::kReady; });
}

NextQuery Session::Next(std::chrono::milliseconds settle) {
  std::unique_lock lock(mu_);
  WaitSettled(lock, settle);
  NextQuery out;
  out.state = state_;
  out.error = error_;
  if (pending_) {
    out.pending = PendingQuery{*pending_, answered_, estimated_total_};
  }
  return out;
}

SubmitResult Session::Submit(std::uint64_t query_id, Choice choice,
                             std::chrono::milliseconds settle) {
  std::unique_lock lock(mu_);
  SubmitResult out;
  if (state_ == SessionState::kFinished || state_ == SessionState::kFailed) {
    out.status = SubmitStatus::kFinished;
    out.state = state_;
    out.answered = answered_;
    out.message = "session is " + std::string(ToString(state_));
    return out;
  }
  if (!pending_ || pending_->query_id != query_id) {
    out.status = SubmitStatus::kConflict;
    out.state = state_;
    out.answered = answered_;
    out.message = "query " + std::to_string(query_id) + " is not pending";
    if (pending_) {
      out.message += "; pending query is " + std::to_string(pending_->query_id);
    }
    return out;
  }
  const LogEntry entry{pending_->query_id, pending_->kind, pending_->left,
                       pending_->right,    choice,         UtcTimestamp()};
  if (sink_) sink_(entry);
  log_.push_back(entry);
  ++answered_;
  answer_ = ToSign(choice);
  pending_.reset();
  state_ = SessionState::kReady;
  cv_.notify_all();
  WaitSettled(lock, settle);
  out.status = SubmitStatus::kAccepted;
  out.state = state_;
  out.answered = answered_;
  return out;
}

std::optional<SessionResult> Session::Result() const {
  std::lock_guard lock(mu_);
  return result_;
}

SessionState Session::state() const {
  std::lock_guard lock(mu_);
  return state_;
}

std::size_t Session::answered() const {
  std::lock_guard lock(mu_);
  return answered_;
}

std::vector<LogEntry> Session::log() const {
  std::lock_guard lock(mu_);
  return log_;
}

SessionResult ReplayLog(const Dataset& data, const SessionParams& params,
                        const std::vector<LogEntry>& log) {
  params.labeling.Validate(data.size());
  Rng rng = Rng(params.seed).Fork(streams::kAlgorithm);
  LogOracle oracle(log);
  LabelSet labels = InferLabels(data, params.labeling, oracle, rng);
  const OracleStats stats = labels.queries;
  return SessionResult{std::move(labels), stats};
}

std::string SessionParamsToJson(const SessionParams& params) {
  json j = {{"dataset", params.dataset},
            {"t", params.labeling.t},
            {"m", params.labeling.m},
            {"policy", ToString(params.labeling.delegation_policy)},
            {"seed", params.seed},
            {"positive_class", params.positive_class}};
  if (params.labeling.vote_subset_size) {
    j["vote_subset_size"] = *params.labeling.vote_subset_size;
  } else {
    j["vote_subset_size"] = nullptr;
  }
  return j.dump();
}

SessionParams SessionParamsFromJson(const std::string& text) {
  json j;
  try {
    j = json::parse(text.empty() ? std::string("{}") : text);
  } catch (const json::exception& ex) {
    throw ParameterError(std::string("request body is not JSON: ") + ex.what());
  }
  if (!j.is_object()) throw ParameterError("request body must be an object");
  SessionParams p;
  try {
    p.dataset = j.value("dataset", p.dataset);
    p.labeling.t = j.value("t", p.labeling.t);
    p.labeling.m = j.value("m", p.labeling.m);
    p.labeling.delegation_policy =
        ParseDelegationPolicy(j.value("policy", std::string("random")));
    if (j.contains("vote_subset_size") && !j["vote_subset_size"].is_null()) {
      p.labeling.vote_subset_size = j["vote_subset_size"].get<std::size_t>();
    }
    p.seed = j.value("seed", p.seed);
    p.positive_class = j.value("positive_class", p.positive_class);
  } catch (const json::exception& ex) {
    throw ParameterError(std::string("bad session parameters: ") + ex.what());
  }
  return p;
}

SessionManager::SessionManager(ManagerOptions options)
    : options_(std::move(options)) {
  if (options_.sessions_dir) {
    std::error_code ec;
    std::filesystem::create_directories(*options_.sessions_dir, ec);
    if (ec) {
      throw ConfigError("cannot create sessions directory '" +
                        options_.sessions_dir->string() + "'");
    }
  }
}

void SessionManager::AddDataset(const std::string& name, Dataset data) {
  std::lock_guard lock(mu_);
  datasets_[name] = std::make_shared<const Dataset>(std::move(data));
}

bool SessionManager::HasDataset(const std::string& name) const {
  std::lock_guard lock(mu_);
  return datasets_.count(name) > 0;
}

std::string SessionManager::NewId() {
  static thread_local std::random_device device;
  while (true) {
    const std::uint64_t raw =
        (static_cast<std::uint64_t>(device()) << 32) ^ device();
    std::ostringstream s;
    s << std::hex << raw;
    std::string id = s.str();
    if (!sessions_.count(id)) return id;
  }
}

std::shared_ptr<Session> SessionManager::Start(const std::string& id,
                                               const SessionParams& params,
                                               std::vector<LogEntry> replay) {
  const auto data = datasets_.find(params.dataset);
  if (data == datasets_.end()) {
    throw ConfigError("unknown dataset '" + params.dataset + "'");
  }
  Session::AnswerSink sink;
  if (options_.sessions_dir) {
    const auto log_path = *options_.sessions_dir / (id + ".answers.jsonl");
    sink = [log_path](const LogEntry& e) {
      std::ofstream out(log_path, std::ios::app | std::ios::binary);
      out << e.ToJsonLine() << '\n';
      out.flush();
      if (!out) throw std::runtime_error("cannot append to answer log");
    };
  }
  auto session = std::make_shared<Session>(id, data->second, params,
                                           std::move(replay), std::move(sink),
                                           options_.answer_timeout);
  sessions_[id] = session;
  return session;
}

std::string SessionManager::Create(const SessionParams& params) {
  std::lock_guard lock(mu_);
  const auto data = datasets_.find(params.dataset);
  if (data == datasets_.end()) {
    throw ConfigError("unknown dataset '" + params.dataset + "'");
  }
  params.labeling.Validate(data->second->size());
  const std::string id = NewId();
  if (options_.sessions_dir) {
    std::ofstream meta(*options_.sessions_dir / (id + ".session.json"),
                       std::ios::binary);
    meta << SessionParamsToJson(params) << '\n';
    if (!meta) throw std::runtime_error("cannot write session metadata");
  }
  Start(id, params, {});
  return id;
}

std::shared_ptr<Session> SessionManager::Find(const std::string& id) const {
  std::lock_guard lock(mu_);
  const auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

std::vector<std::string> SessionManager::Ids() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> out;
  for (const auto& [id, _] : sessions_) out.push_back(id);
  return out;
}

std::size_t SessionManager::ResumeAll() {
  if (!options_.sessions_dir) return 0;
  std::lock_guard lock(mu_);
  const std::string suffix = ".session.json";
  std::vector<std::filesystem::path> metas;
  for (const auto& entry :
       std::filesystem::directory_iterator(*options_.sessions_dir)) {
    const std::string name = entry.path().filename().string();
    if (name.size() > suffix.size() &&
        name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0) {
      metas.push_back(entry.path());
    }
  }
  std::sort(metas.begin(), metas.end());
  std::size_t resumed = 0;
  for (const auto& meta_path : metas) {
    const std::string name = meta_path.filename().string();
    const std::string id = name.substr(0, name.size() - suffix.size());
    if (sessions_.count(id)) continue;
    std::ifstream meta(meta_path);
    std::stringstream buf;
    buf << meta.rdbuf();
    const SessionParams params = SessionParamsFromJson(buf.str());
    std::vector<LogEntry> replay;
    std::ifstream log(*options_.sessions_dir / (id + ".answers.jsonl"));
    for (std::string line; std::getline(log, line);) {
      if (!line.empty()) replay.push_back(LogEntry::FromJsonLine(line));
    }
    Start(id, params, std::move(replay));
    ++resumed;
  }
  return resumed;
}

}  // namespace pairlabel::annotate
