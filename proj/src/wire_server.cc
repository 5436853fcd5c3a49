/*
 * Copyright 2026 The xai-bench Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "xaibench/wire_server.h"

#include <functional>

#include "httplib.h"
#include "xaibench/protocol.h"

namespace xaibench {
namespace {

using protocol::Json;

void reply_error(httplib::Response& res, int status, const std::string& msg) {
  res.status = status;
  res.set_content(Json{{"error", msg}}.dump(), "application/json");
}

// Parses the body, runs the handler, maps failures to HTTP statuses:
// malformed input 400, everything else 500.
void handle(const httplib::Request& req, httplib::Response& res,
            const std::function<Json(const Json&)>& fn) {
  Json body;
  if (!req.body.empty()) {
    try {
      body = Json::parse(req.body);
    } catch (const Json::exception& e) {
      return reply_error(res, 400, e.what());
    }
  }
  try {
    res.set_content(fn(body).dump(), "application/json");
  } catch (const ProtocolError& e) {
    reply_error(res, 400, e.what());
  } catch (const DataError& e) {
    reply_error(res, 400, e.what());
  } catch (const ConfigError& e) {
    reply_error(res, 400, e.what());
  } catch (const std::exception& e) {
    reply_error(res, 500, e.what());
  }
}

}  // namespace

WireServer::WireServer(ModelHandle model, int max_batch_size)
    : model_(std::move(model)),
      info_(model_->info()),
      server_(std::make_unique<httplib::Server>()) {
  if (max_batch_size > 0) info_.max_batch_size = max_batch_size;

  server_->Get("/info", [this](const httplib::Request& req,
                               httplib::Response& res) {
    handle(req, res, [this](const Json&) { return protocol::encode_info(info_); });
  });

  server_->Post("/tokenize", [this](const httplib::Request& req,
                                    httplib::Response& res) {
    handle(req, res, [this](const Json& body) {
      const auto inputs = protocol::decode_tokenize_request(body);
      // Length checks are the client's job; the raw tokenization goes back.
      return protocol::encode_tokenize_response(
          model_->tokenize_unchecked(inputs));
    });
  });

  server_->Post("/predict", [this](const httplib::Request& req,
                                   httplib::Response& res) {
    std::vector<TokenIds> batch;
    try {
      batch = protocol::decode_predict_request(Json::parse(req.body));
    } catch (const std::exception& e) {
      return reply_error(res, 400, e.what());
    }
    if (static_cast<int>(batch.size()) > info_.max_batch_size) {
      return reply_error(res, 413,
                         "batch of " + std::to_string(batch.size()) +
                             " exceeds max_batch_size " +
                             std::to_string(info_.max_batch_size));
    }
    handle(req, res, [&](const Json&) {
      return protocol::encode_predict_response(model_->predict_uncached(batch));
    });
  });

  server_->Post("/gradients", [this](const httplib::Request& req,
                                     httplib::Response& res) {
    handle(req, res, [this](const Json& body) {
      const auto request = protocol::decode_gradients_request(body);
      return protocol::encode_gradients_response(embedding_gradients(
          *model_, request.input_ids, request.baseline_ids, request.target,
          request.alphas));
    });
  });
}

WireServer::~WireServer() { stop(); }

int WireServer::bind(const std::string& host, int port) {
  const int bound = port == 0 ? server_->bind_to_any_port(host)
                              : (server_->bind_to_port(host, port) ? port : -1);
  if (bound < 0) {
    throw TransportError("cannot bind " + host + ":" + std::to_string(port));
  }
  return bound;
}

void WireServer::serve() { server_->listen_after_bind(); }

void WireServer::start() {
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

void WireServer::stop() {
  server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace xaibench
