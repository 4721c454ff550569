#include "mosbench/server/http.hpp"

#include "httplib.h"

namespace mosbench::server {
namespace {

using nlohmann::json;

constexpr const char* kJson = "application/json";

void send_error(httplib::Response& res, int status, const std::string& code, const std::string& message) {
  res.status = status;
  res.set_content(json{{"error", {{"code", code}, {"message", message}}}}.dump(), kJson);
}

json parse_body(const httplib::Request& req) {
  json body = json::parse(req.body, nullptr, false);
  if (body.is_discarded()) throw ServiceError(400, "bad_json", "request body is not valid JSON");
  return body;
}

template <typename F>
httplib::Server::Handler guarded(F&& f) {
  return [f = std::forward<F>(f)](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const ServiceError& e) {
      send_error(res, e.status(), e.code(), e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, "internal", e.what());
    }
  };
}

}  // namespace

HttpServer::HttpServer(AnnotationService& service, HttpOptions options)
    : service_(service), options_(std::move(options)), http_(std::make_unique<httplib::Server>()) {
  routes();
}

HttpServer::~HttpServer() { stop(); }

void HttpServer::routes() {
  auto& s = *http_;
  s.Get(R"(/sessions/([^/]+)/next)", guarded([this](const httplib::Request& req, httplib::Response& res) {
          res.set_content(service_.next_task(req.matches[1]).dump(), kJson);
        }));
  s.Post(R"(/sessions/([^/]+)/ratings)", guarded([this](const httplib::Request& req, httplib::Response& res) {
           const auto submission = submission_from_json(parse_body(req));
           res.set_content(service_.submit_rating(req.matches[1], submission).dump(), kJson);
         }));
  s.Get(R"(/sessions/([^/]+)/progress)", guarded([this](const httplib::Request& req, httplib::Response& res) {
          res.set_content(service_.progress_json(req.matches[1]).dump(), kJson);
        }));
  s.Post("/studies", guarded([this](const httplib::Request& req, httplib::Response& res) {
           if (options_.admin_token.empty() || req.get_header_value("X-Admin-Token") != options_.admin_token) {
             throw ServiceError(403, "forbidden", "admin token required");
           }
           const auto request = study_request_from_json(parse_body(req));
           res.status = 201;
           res.set_content(service_.create_study(request).dump(), kJson);
         }));
  s.Get(R"(/studies/([^/]+)/export)", guarded([this](const httplib::Request& req, httplib::Response& res) {
          res.set_content(service_.export_ratings(req.matches[1]), "text/csv");
        }));
}

int HttpServer::bind() {
  int port = options_.port;
  if (port == 0) {
    port = http_->bind_to_any_port(options_.host);
  } else if (!http_->bind_to_port(options_.host, port)) {
    port = -1;
  }
  if (port < 0) throw Error("cannot bind " + options_.host + ":" + std::to_string(options_.port));
  return port;
}

void HttpServer::listen() { http_->listen_after_bind(); }

void HttpServer::stop() {
  if (http_) http_->stop();
}

bool HttpServer::running() const { return http_->is_running(); }

}  // namespace mosbench::server
