#pragma once

#include <memory>
#include <string>

#include "mosbench/server/service.hpp"

namespace httplib {
class Server;
}

namespace mosbench::server {

struct HttpOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::string admin_token;  // empty disables POST /studies
};

/// HTTP+JSON front end of an AnnotationService. Routes:
///   GET  /sessions/{id}/next
///   POST /sessions/{id}/ratings
///   GET  /sessions/{id}/progress
///   POST /studies              (X-Admin-Token header)
///   GET  /studies/{id}/export  (text/csv)
/// Errors come back as {"error": {"code": ..., "message": ...}} with a matching status.
class HttpServer {
 public:
  HttpServer(AnnotationService& service, HttpOptions options);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds and returns the port. Throws Error if binding fails.
  int bind();
  /// Serves until stop(). Call bind() first.
  void listen();
  void stop();
  bool running() const;

 private:
  void routes();

  AnnotationService& service_;
  HttpOptions options_;
  std::unique_ptr<httplib::Server> http_;
};

}  // namespace mosbench::server
