#include "httplib.h"
#include "nmtdebug/service.hpp"

namespace nmtdebug {

namespace {

constexpr const char *kFallbackPage = R"(<!doctype html>
<html><head><meta charset="utf-8"><title>nmtdebug</title></head>
<body>
<h1>nmtdebug inspection service</h1>
<p>No UI bundle is mounted (start the server with --ui-dir). The JSON API is available:</p>
<ul>
<li><a href="/api/meta">/api/meta</a></li>
<li><a href="/api/records?offset=0&amp;limit=50&amp;sort=confidence&amp;dir=asc">/api/records</a></li>
<li>/api/record/&lt;id&gt;</li>
<li>/api/compare/&lt;id&gt;</li>
</ul>
</body></html>
)";

}  // namespace

struct ServiceHost::Impl {
  const InspectionService &service;
  ServerOptions options;
  httplib::Server server;
  bool bound = false;

  Impl(const InspectionService &svc, ServerOptions opts) : service(svc), options(std::move(opts)) {
    // httplib also sets SO_REUSEPORT by default, which lets a second server
    // share a port that is already in use.
    server.set_socket_options([](socket_t sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char *>(&yes), sizeof(yes));
    });
    server.Get(R"(/api/.*)", [this](const httplib::Request &req, httplib::Response &res) {
      QueryParams params;
      for (const auto &[key, value] : req.params) params.emplace(key, value);
      const auto out = service.handle(req.path, params);
      res.status = out.status;
      res.set_content(out.body, out.content_type);
    });
    bool mounted = false;
    if (!options.ui_dir.empty()) mounted = server.set_mount_point("/", options.ui_dir.string());
    if (!mounted) {
      server.Get("/", [](const httplib::Request &, httplib::Response &res) {
        res.set_content(kFallbackPage, "text/html; charset=utf-8");
      });
    }
  }
};

ServiceHost::ServiceHost(const InspectionService &service, ServerOptions options)
    : impl_(std::make_unique<Impl>(service, std::move(options))) {}

ServiceHost::~ServiceHost() { stop(); }

int ServiceHost::bind() {
  int port = impl_->options.port;
  if (port == 0) {
    port = impl_->server.bind_to_any_port(impl_->options.host);
    impl_->bound = port > 0;
  } else {
    impl_->bound = impl_->server.bind_to_port(impl_->options.host, port);
  }
  return impl_->bound ? port : -1;
}

bool ServiceHost::listen() { return impl_->bound && impl_->server.listen_after_bind(); }

void ServiceHost::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace nmtdebug
