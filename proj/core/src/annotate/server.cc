#include "pairlabel/annotate/server.h"

#include <sstream>
#include <stdexcept>

#include <httplib.h>
#include <json.hpp>

#include "pairlabel/errors.h"

namespace pairlabel::annotate {
namespace {

using nlohmann::json;

constexpr char kJson[] = "application/json";

void Reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void Error(httplib::Response& res, int status, const std::string& message) {
  Reply(res, status, json{{"error", message}});
}

json PointJson(const Dataset& data, PointId id) {
  const DataPoint& p = data[id];
  json j = {{"id", id}};
  j["payload_ref"] = p.payload_ref ? json(*p.payload_ref) : json(nullptr);
  return j;
}

json StatsJson(const OracleStats& stats) {
  return {{"positivity", stats.count_positivity},
          {"ambiguity", stats.count_ambiguity},
          {"total", stats.total()}};
}

}  // namespace

std::string PromptFor(OracleKind kind, const std::string& positive_class) {
  if (kind == OracleKind::kAmbiguity) {
    return "Which of these two items is harder to classify?";
  }
  return "Which of these two items is more likely to be " + positive_class +
         "?";
}

struct AnnotateServer::Impl {
  SessionManager& manager;
  ServerOptions options;
  httplib::Server http;

  Impl(SessionManager& m, ServerOptions o) : manager(m), options(std::move(o)) {
    Routes();
  }

  std::shared_ptr<Session> FindOr404(const httplib::Request& req,
                                     httplib::Response& res) {
    auto session = manager.Find(req.matches[1]);
    if (!session) {
      Error(res, 404, "unknown session '" + std::string(req.matches[1]) + "'");
    }
    return session;
  }

  void Routes() {
    http.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
      Reply(res, 200, json{{"status", "ok"}});
    });

    http.Post("/sessions", [this](const httplib::Request& req,
                                  httplib::Response& res) {
      try {
        const SessionParams params = SessionParamsFromJson(req.body);
        const std::string id = manager.Create(params);
        Reply(res, 201, json{{"session_id", id}});
      } catch (const ParameterError& e) {
        Error(res, 400, e.what());
      } catch (const ConfigError& e) {
        Error(res, 400, e.what());
      }
    });

    http.Get(R"(/sessions/([^/]+)/query)", [this](const httplib::Request& req,
                                                  httplib::Response& res) {
      const auto session = FindOr404(req, res);
      if (!session) return;
      const NextQuery next = session->Next(options.settle);
      if (next.state == SessionState::kFailed) {
        Reply(res, 500, json{{"state", "failed"}, {"error", next.error}});
        return;
      }
      if (next.state == SessionState::kFinished) {
        Reply(res, 200,
              json{{"finished", true},
                   {"state", "finished"},
                   {"result", "/sessions/" + session->id() + "/result"}});
        return;
      }
      if (!next.pending) {
        Error(res, 503, "driver has not posted a query yet; retry");
        return;
      }
      const ComparisonQuery& q = next.pending->query;
      Reply(res, 200,
            json{{"finished", false},
                 {"query_id", q.query_id},
                 {"kind", ToString(q.kind)},
                 {"prompt", PromptFor(q.kind, session->params().positive_class)},
                 {"left", PointJson(session->data(), q.left)},
                 {"right", PointJson(session->data(), q.right)},
                 {"progress",
                  {{"answered", next.pending->answered},
                   {"estimated_total", next.pending->estimated_total}}}});
    });

    http.Post(R"(/sessions/([^/]+)/answer)", [this](const httplib::Request& req,
                                                    httplib::Response& res) {
      const auto session = FindOr404(req, res);
      if (!session) return;
      std::uint64_t query_id = 0;
      Choice choice = Choice::kLeft;
      try {
        const json body = json::parse(req.body);
        query_id = body.at("query_id").get<std::uint64_t>();
        choice = ParseChoice(body.at("choice").get<std::string>());
      } catch (const json::exception& e) {
        Error(res, 400, std::string("bad answer body: ") + e.what());
        return;
      } catch (const ParameterError& e) {
        Error(res, 400, e.what());
        return;
      }
      const SubmitResult r = session->Submit(query_id, choice, options.settle);
      if (r.status != SubmitStatus::kAccepted) {
        Error(res, 409, r.message);
        return;
      }
      Reply(res, 200,
            json{{"accepted", true},
                 {"answered", r.answered},
                 {"state", ToString(r.state)}});
    });

    http.Get(R"(/sessions/([^/]+)/result)", [this](const httplib::Request& req,
                                                   httplib::Response& res) {
      const auto session = FindOr404(req, res);
      if (!session) return;
      const auto result = session->Result();
      if (!result) {
        Error(res, 409,
              "session is " + std::string(ToString(session->state())));
        return;
      }
      if (req.get_param_value("format") == "csv") {
        std::ostringstream csv;
        WriteLabelSetCsv(csv, result->labels, "session=" + session->id());
        res.status = 200;
        res.set_content(csv.str(), "text/csv");
        return;
      }
      json labels = json::array();
      for (std::size_t i = 0; i < result->labels.size(); ++i) {
        labels.push_back(
            {{"id", i},
             {"label", ToInt(result->labels.labels[i])},
             {"provenance", ToString(result->labels.provenance[i])}});
      }
      Reply(res, 200,
            json{{"session_id", session->id()},
                 {"labels", labels},
                 {"delegation", result->labels.delegation},
                 {"stats", StatsJson(result->stats)}});
    });

    http.set_exception_handler([](const httplib::Request&,
                                  httplib::Response& res,
                                  std::exception_ptr ep) {
      try {
        std::rethrow_exception(ep);
      } catch (const std::exception& e) {
        Error(res, 500, e.what());
      } catch (...) {
        Error(res, 500, "unknown error");
      }
    });

    if (options.static_dir) {
      if (!http.set_mount_point("/", options.static_dir->string())) {
        throw ConfigError("static directory '" + options.static_dir->string() +
                          "' does not exist");
      }
    }
  }
};

AnnotateServer::AnnotateServer(SessionManager& manager, ServerOptions options)
    : impl_(std::make_unique<Impl>(manager, std::move(options))) {}

AnnotateServer::~AnnotateServer() { Stop(); }

int AnnotateServer::Bind() {
  const auto& o = impl_->options;
  if (o.port == 0) {
    const int port = impl_->http.bind_to_any_port(o.host);
    if (port < 0) throw std::runtime_error("cannot bind " + o.host);
    return port;
  }
  if (!impl_->http.bind_to_port(o.host, o.port)) {
    throw std::runtime_error("cannot bind " + o.host + ":" +
                             std::to_string(o.port));
  }
  return o.port;
}

void AnnotateServer::Serve() { impl_->http.listen_after_bind(); }

void AnnotateServer::Stop() { impl_->http.stop(); }

void AnnotateServer::WaitUntilReady() const { impl_->http.wait_until_ready(); }

}  // namespace pairlabel::annotate
