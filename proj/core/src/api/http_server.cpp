// Copyright 2026 The rmon Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rmon/api/http_server.hpp"

#include <thread>

#include <httplib.h>

#include "rmon/common/error.hpp"

namespace rmon::api {

struct HttpServer::Impl {
    explicit Impl(Platform& platform) : service(platform) {}

    ApiService service;
    httplib::Server server;
    std::thread worker;
    int port = -1;
};

namespace {

void adapt(ApiService const& service, httplib::Request const& in, httplib::Response& out) {
    ApiRequest req;
    req.method = in.method;
    req.path = in.path;
    for (auto const& [key, value] : in.params) {
        req.query[key] = value;
    }
    for (auto const& [key, value] : in.headers) {
        req.headers[key] = value;
    }
    req.body = in.body;
    auto const res = service.handle(req);
    out.status = res.status;
    out.set_content(res.body, res.content_type);
}

}  // namespace

HttpServer::HttpServer(Platform& platform) : impl_(std::make_unique<Impl>(platform)) {
    auto handler = [this](httplib::Request const& in, httplib::Response& out) { adapt(impl_->service, in, out); };
    auto const any = R"(/.*)";
    impl_->server.Get(any, handler);
    impl_->server.Post(any, handler);
    impl_->server.Put(any, handler);
    impl_->server.Delete(any, handler);
    impl_->server.Patch(any, handler);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(std::string const& host, int port) {
    int bound = port;
    if (port == 0) {
        bound = impl_->server.bind_to_any_port(host);
    } else if (!impl_->server.bind_to_port(host, port)) {
        bound = -1;
    }
    if (bound < 0) {
        throw Error(ErrorCode::TransportFailure, "cannot bind " + host + ":" + std::to_string(port));
    }
    impl_->port = bound;
    return bound;
}

void HttpServer::start() {
    impl_->worker = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
}

void HttpServer::run() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
    impl_->server.stop();
    if (impl_->worker.joinable()) {
        impl_->worker.join();
    }
}

int HttpServer::port() const noexcept { return impl_->port; }

}  // namespace rmon::api
