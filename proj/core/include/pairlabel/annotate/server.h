#ifndef PAIRLABEL_ANNOTATE_SERVER_H_
#define PAIRLABEL_ANNOTATE_SERVER_H_

#include <chrono>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "pairlabel/annotate/session.h"

namespace pairlabel::annotate {

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  // Served at / when set, e.g. a built questionnaire UI.
  std::optional<std::filesystem::path> static_dir;
  // Longest a request waits for the driver to post the next query.
  std::chrono::milliseconds settle = std::chrono::seconds(10);
};

// JSON over HTTP:
//   GET  /healthz
//   POST /sessions                   {dataset, t, m, policy, vote_subset_size,
//                                     seed, positive_class} -> {session_id}
//   GET  /sessions/{id}/query        pending query or finished marker
//   POST /sessions/{id}/answer       {query_id, choice: "left"|"right"}
//   GET  /sessions/{id}/result       labels and query counts; ?format=csv
// Errors are {"error": message} with status 400, 404, 409 or 500.
class AnnotateServer {
 public:
  AnnotateServer(SessionManager& manager, ServerOptions options);
  ~AnnotateServer();

  AnnotateServer(const AnnotateServer&) = delete;
  AnnotateServer& operator=(const AnnotateServer&) = delete;

  // Binds the listening socket and returns the port. Throws
  // std::runtime_error when binding fails.
  int Bind();
  // Serves until Stop(). Requires Bind().
  void Serve();
  // Safe to call from any thread.
  void Stop();
  void WaitUntilReady() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Wording shown to the annotator for each query kind.
std::string PromptFor(OracleKind kind, const std::string& positive_class);

}  // namespace pairlabel::annotate

#endif  // PAIRLABEL_ANNOTATE_SERVER_H_
