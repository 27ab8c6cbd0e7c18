#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "horizonbench/forecaster.hpp"

namespace horizonbench {

/// One line of the external-forecaster protocol (harness -> bridge).
struct BridgeRequest {
    std::string id;
    std::string model;
    std::vector<double> context;
    Date start_date;
    int horizon = 0;
    std::vector<double> quantiles{kQuantileLevels.begin(), kQuantileLevels.end()};
    int num_samples = 20;
    std::uint64_t seed = 0;

    friend bool operator==(const BridgeRequest&, const BridgeRequest&) = default;
};

/// One line of the protocol (bridge -> harness). `quantile_rows` is set when
/// ok, `message` otherwise.
struct BridgeResponse {
    std::string id;
    bool ok = false;
    std::vector<std::vector<double>> quantile_rows;
    std::string message;

    friend bool operator==(const BridgeResponse&, const BridgeResponse&) = default;
};

/// Compact single-line JSON, no trailing newline. Doubles round-trip exactly.
std::string encode(const BridgeRequest& request);
std::string encode(const BridgeResponse& response);

/// Throw InvalidArgument ("malformed bridge message: ...") on bad JSON or
/// missing/mistyped fields. decode_request enforces horizon >= 1.
BridgeRequest decode_request(std::string_view line);
BridgeResponse decode_response(std::string_view line);

/// A bidirectional newline-delimited text stream with one request in flight.
class LineChannel {
public:
    virtual ~LineChannel() = default;

    /// Sends `line` plus '\n' and returns the next line received (without the
    /// newline). Throws Error "bridge failure" on I/O errors, EOF or timeout.
    virtual std::string round_trip(const std::string& line) = 0;
};

/// Runs `command` through /bin/sh and talks to its stdin/stdout.
class SubprocessChannel final : public LineChannel {
public:
    SubprocessChannel(const std::string& command, std::chrono::milliseconds timeout);
    ~SubprocessChannel() override;
    SubprocessChannel(const SubprocessChannel&) = delete;
    SubprocessChannel& operator=(const SubprocessChannel&) = delete;

    std::string round_trip(const std::string& line) override;

private:
    int pid_ = -1;
    int to_child_ = -1;
    int from_child_ = -1;
    std::chrono::milliseconds timeout_;
    std::string buffer_;
};

class TcpChannel final : public LineChannel {
public:
    TcpChannel(const std::string& host, int port, std::chrono::milliseconds timeout);
    ~TcpChannel() override;
    TcpChannel(const TcpChannel&) = delete;
    TcpChannel& operator=(const TcpChannel&) = delete;

    std::string round_trip(const std::string& line) override;

private:
    int fd_ = -1;
    std::chrono::milliseconds timeout_;
    std::string buffer_;
};

/// "tcp://host:port" opens a socket; anything else (optionally prefixed with
/// "stdio:") is a shell command to spawn.
std::unique_ptr<LineChannel> open_channel(const std::string& address, std::chrono::milliseconds timeout);

/// Up to `max_channels` bridge connections, each used by one caller at a time.
/// Channels are opened lazily and dropped after a failure.
class BridgePool {
public:
    explicit BridgePool(std::string address, int max_channels = 1,
                        std::chrono::milliseconds timeout = std::chrono::minutes(10));

    [[nodiscard]] const std::string& address() const noexcept { return address_; }

    BridgeResponse call(const BridgeRequest& request);

private:
    std::string address_;
    int max_channels_;
    std::chrono::milliseconds timeout_;
    std::mutex mutex_;
    std::condition_variable available_;
    std::vector<std::unique_ptr<LineChannel>> idle_;
    int open_ = 0;
};

/// Forecaster backed by a bridge model. The request's start_date is the first
/// context date; the returned rows must be 9 x horizon and monotone.
class ExternalForecaster final : public Forecaster {
public:
    ExternalForecaster(std::shared_ptr<BridgePool> pool, std::string model, int num_samples = 20);

    ForecastResult forecast(const DailySeries& context, int horizon_days, std::uint64_t seed) override;

private:
    std::shared_ptr<BridgePool> pool_;
    std::string model_;
    int num_samples_;
};

}  // namespace horizonbench
