#include "gasp/service/http.hpp"

#include <httplib.h>

namespace gasp::service {

void bind(httplib::Server& server, AdvisoryService& service, const std::string& cors_origin) {
  server.set_default_headers({{"Access-Control-Allow-Origin", cors_origin},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});
  auto forward = [&service](const httplib::Request& req, httplib::Response& res) {
    Response r = service.handle({req.method, req.path, req.body});
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  server.Get(".*", forward);
  server.Post(".*", forward);
  server.Put(".*", forward);
  server.Delete(".*", forward);
  server.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
}

}  // namespace gasp::service
