#pragma once

#include <string>
#include <string_view>
#include <utility>

#include <httplib.h>
#include <json.hpp>

#include "honestrag/errors.hpp"
#include "honestrag/gateway.hpp"

namespace honestrag {

/// Minimal remote chat protocol: POST {model, system, user, params} as JSON,
/// expect {"text": ...} back. One retry on transport failure, then
/// BackendFailure; non-2xx responses fail immediately.
class RemoteBackend : public ChatBackend {
public:
    RemoteBackend(std::string url, int timeout_ms = 30000, std::string model = "default")
        : url_(std::move(url)), timeout_ms_(timeout_ms), model_(std::move(model)) {
        const std::size_t scheme = url_.find("://");
        const std::size_t host_start = scheme == std::string::npos ? 0 : scheme + 3;
        const std::size_t path_start = url_.find('/', host_start);
        if (path_start == std::string::npos) {
            base_ = url_;
            path_ = "/";
        } else {
            base_ = url_.substr(0, path_start);
            path_ = url_.substr(path_start);
        }
    }

    std::string name() const override { return "remote:" + url_; }

    std::string complete(std::string_view system_text, std::string_view user_text,
                         const DecodeParams& params) const override {
        nlohmann::ordered_json body;
        body["model"] = model_;
        body["system"] = std::string(system_text);
        body["user"] = std::string(user_text);
        body["params"] = {{"temperature", params.temperature}, {"max_tokens", params.max_tokens}};
        const std::string payload = body.dump();

        httplib::Result res = post_once(payload);
        if (!res) res = post_once(payload);  // one retry on transport failure
        if (!res) {
            throw BackendFailure("backend " + url_ + " unreachable: " +
                                 httplib::to_string(res.error()));
        }
        if (res->status < 200 || res->status >= 300) {
            throw BackendFailure("backend " + url_ + " returned HTTP " +
                                 std::to_string(res->status));
        }
        try {
            const auto j = nlohmann::json::parse(res->body);
            if (!j.is_object() || !j.contains("text") || !j.at("text").is_string()) {
                throw BackendFailure("backend response missing string \"text\"");
            }
            return j.at("text").get<std::string>();
        } catch (const nlohmann::json::parse_error& e) {
            throw BackendFailure(std::string("backend response is not JSON: ") + e.what());
        }
    }

private:
    httplib::Result post_once(const std::string& payload) const {
        httplib::Client client(base_);
        client.set_connection_timeout(timeout_ms_ / 1000, (timeout_ms_ % 1000) * 1000);
        client.set_read_timeout(timeout_ms_ / 1000, (timeout_ms_ % 1000) * 1000);
        client.set_write_timeout(timeout_ms_ / 1000, (timeout_ms_ % 1000) * 1000);
        return client.Post(path_, payload, "application/json");
    }

    std::string url_;
    int timeout_ms_;
    std::string model_;
    std::string base_;
    std::string path_;
};

}  // namespace honestrag
