#pragma once

#include <httplib.h>

#include "csp/play_service.hpp"

namespace csp {

inline void bind_routes(httplib::Server& server, PlayService& service) {
  auto forward = [&service](const httplib::Request& req, httplib::Response& res) {
    auto r = service.handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json; charset=utf-8");
  };
  server.Post("/games", forward);
  server.Get(R"(/games/[^/]+)", forward);
  server.Post(R"(/games/[^/]+/moves)", forward);
  server.Get(R"(/games/[^/]+/analysis)", forward);
  server.Get("/catalog", forward);
  server.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (!res.body.empty()) return;
    res.set_content(json{{"error", "no route for " + req.method + " " + req.path}}.dump(),
                    "application/json; charset=utf-8");
  });
}

}  // namespace csp
