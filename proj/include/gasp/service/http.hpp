#pragma once

#include <string>

#include "gasp/service/service.hpp"

namespace httplib {
class Server;
}

namespace gasp::service {

/// Routes every request on `server` to `service`, with CORS headers for
/// `cors_origin`.
void bind(httplib::Server& server, AdvisoryService& service, const std::string& cors_origin = "*");

}  // namespace gasp::service
