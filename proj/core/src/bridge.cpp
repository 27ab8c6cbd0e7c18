#include "horizonbench/bridge.hpp"

#include <cerrno>
#include <cmath>
#include <csignal>
#include <cstring>
#include <sstream>

#include <fcntl.h>
#include <netdb.h>
#include <poll.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "horizonbench/error.hpp"

namespace horizonbench {

namespace {

using nlohmann::json;

[[noreturn]] void malformed(const std::string& what) { throw InvalidArgument("malformed bridge message: " + what); }

[[noreturn]] void io_failure(const std::string& what) {
    throw Error("bridge failure: " + what + (errno ? std::string(" (") + std::strerror(errno) + ")" : ""));
}

void require_finite(const std::vector<double>& values, const char* field) {
    for (double v : values) {
        if (!std::isfinite(v)) throw InvalidArgument(std::string("non-finite value in bridge field ") + field);
    }
}

const json& field(const json& doc, const char* name) {
    auto it = doc.find(name);
    if (it == doc.end()) malformed(std::string("missing field '") + name + "'");
    return *it;
}

std::string get_string(const json& doc, const char* name) {
    const auto& v = field(doc, name);
    if (!v.is_string()) malformed(std::string("field '") + name + "' is not a string");
    return v.get<std::string>();
}

long long get_integer(const json& doc, const char* name) {
    const auto& v = field(doc, name);
    if (!v.is_number_integer()) malformed(std::string("field '") + name + "' is not an integer");
    return v.get<long long>();
}

std::vector<double> get_numbers(const json& v, const char* name) {
    if (!v.is_array()) malformed(std::string("field '") + name + "' is not an array");
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& x : v) {
        if (!x.is_number()) malformed(std::string("field '") + name + "' holds a non-number");
        out.push_back(x.get<double>());
    }
    return out;
}

json parse_object(std::string_view line) {
    json doc = json::parse(line.begin(), line.end(), nullptr, false);
    if (doc.is_discarded()) malformed("invalid JSON");
    if (!doc.is_object()) malformed("not a JSON object");
    return doc;
}

/// Appends whatever is readable on `fd` to `buffer` until it holds a newline.
std::string read_line(int fd, std::string& buffer, std::chrono::milliseconds timeout) {
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    while (true) {
        if (auto nl = buffer.find('\n'); nl != std::string::npos) {
            std::string line = buffer.substr(0, nl);
            buffer.erase(0, nl + 1);
            if (!line.empty() && line.back() == '\r') line.pop_back();
            return line;
        }
        const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
        if (left.count() <= 0) {
            errno = 0;
            io_failure("timed out waiting for a response");
        }
        pollfd p{fd, POLLIN, 0};
        const int ready = ::poll(&p, 1, static_cast<int>(std::min<long long>(left.count(), 1 << 30)));
        if (ready < 0) {
            if (errno == EINTR) continue;
            io_failure("poll failed");
        }
        if (ready == 0) continue;
        char chunk[65536];
        const ssize_t n = ::read(fd, chunk, sizeof chunk);
        if (n < 0) {
            if (errno == EINTR) continue;
            io_failure("read failed");
        }
        if (n == 0) {
            errno = 0;
            io_failure("peer closed the stream");
        }
        buffer.append(chunk, static_cast<std::size_t>(n));
    }
}

void write_all(int fd, const std::string& data, bool socket) {
    std::size_t sent = 0;
    while (sent < data.size()) {
        const ssize_t n = socket ? ::send(fd, data.data() + sent, data.size() - sent, MSG_NOSIGNAL)
                                 : ::write(fd, data.data() + sent, data.size() - sent);
        if (n < 0) {
            if (errno == EINTR) continue;
            io_failure("write failed");
        }
        sent += static_cast<std::size_t>(n);
    }
}

}  // namespace

std::string encode(const BridgeRequest& r) {
    require_finite(r.context, "context");
    require_finite(r.quantiles, "quantiles");
    json doc = {{"id", r.id},
                {"model", r.model},
                {"context", r.context},
                {"start_date", format_date(r.start_date)},
                {"horizon", r.horizon},
                {"quantiles", r.quantiles},
                {"num_samples", r.num_samples},
                {"seed", r.seed}};
    return doc.dump();
}

std::string encode(const BridgeResponse& r) {
    json doc = {{"id", r.id}, {"status", r.ok ? "ok" : "error"}};
    if (r.ok) {
        for (const auto& row : r.quantile_rows) require_finite(row, "quantile_rows");
        doc["quantile_rows"] = r.quantile_rows;
    } else {
        doc["message"] = r.message;
    }
    return doc.dump();
}

BridgeRequest decode_request(std::string_view line) {
    const json doc = parse_object(line);
    BridgeRequest r;
    r.id = get_string(doc, "id");
    r.model = get_string(doc, "model");
    r.context = get_numbers(field(doc, "context"), "context");
    auto date = parse_date(get_string(doc, "start_date"));
    if (!date) malformed("field 'start_date' is not YYYY-MM-DD");
    r.start_date = *date;
    const long long horizon = get_integer(doc, "horizon");
    if (horizon < 1 || horizon > 100000) malformed("horizon must be >= 1");
    r.horizon = static_cast<int>(horizon);
    if (doc.contains("quantiles")) r.quantiles = get_numbers(doc["quantiles"], "quantiles");
    if (doc.contains("num_samples")) {
        const long long ns = get_integer(doc, "num_samples");
        if (ns < 1 || ns > 1000000) malformed("num_samples must be >= 1");
        r.num_samples = static_cast<int>(ns);
    }
    if (doc.contains("seed")) {
        const auto& s = doc["seed"];
        if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
            malformed("field 'seed' is not a non-negative integer");
        }
        r.seed = s.get<std::uint64_t>();
    }
    return r;
}

BridgeResponse decode_response(std::string_view line) {
    const json doc = parse_object(line);
    BridgeResponse r;
    r.id = get_string(doc, "id");
    const std::string status = get_string(doc, "status");
    if (status == "ok") {
        r.ok = true;
        const auto& rows = field(doc, "quantile_rows");
        if (!rows.is_array()) malformed("field 'quantile_rows' is not an array");
        for (const auto& row : rows) r.quantile_rows.push_back(get_numbers(row, "quantile_rows"));
    } else if (status == "error") {
        r.ok = false;
        r.message = doc.contains("message") ? get_string(doc, "message") : std::string();
    } else {
        malformed("unknown status '" + status + "'");
    }
    return r;
}

SubprocessChannel::SubprocessChannel(const std::string& command, std::chrono::milliseconds timeout)
    : timeout_(timeout) {
    // A bridge that dies mid-write must surface as an error, not kill the harness.
    std::signal(SIGPIPE, SIG_IGN);
    int in[2], out[2];
    if (::pipe2(in, O_CLOEXEC) != 0) io_failure("pipe failed");
    if (::pipe2(out, O_CLOEXEC) != 0) {
        ::close(in[0]);
        ::close(in[1]);
        io_failure("pipe failed");
    }
    pid_ = ::fork();
    if (pid_ < 0) {
        for (int fd : {in[0], in[1], out[0], out[1]}) ::close(fd);
        io_failure("fork failed");
    }
    if (pid_ == 0) {
        ::dup2(in[0], STDIN_FILENO);
        ::dup2(out[1], STDOUT_FILENO);
        ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
        ::_exit(127);
    }
    ::close(in[0]);
    ::close(out[1]);
    to_child_ = in[1];
    from_child_ = out[0];
}

SubprocessChannel::~SubprocessChannel() {
    if (to_child_ >= 0) ::close(to_child_);
    if (from_child_ >= 0) ::close(from_child_);
    if (pid_ > 0) {
        int status = 0;
        // Closing stdin asks the bridge to exit; give it a moment, then insist.
        for (int i = 0; i < 50; ++i) {
            if (::waitpid(pid_, &status, WNOHANG) == pid_) return;
            ::usleep(20000);
        }
        ::kill(pid_, SIGTERM);
        ::waitpid(pid_, &status, 0);
    }
}

std::string SubprocessChannel::round_trip(const std::string& line) {
    write_all(to_child_, line + "\n", false);
    return read_line(from_child_, buffer_, timeout_);
}

TcpChannel::TcpChannel(const std::string& host, int port, std::chrono::milliseconds timeout) : timeout_(timeout) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* found = nullptr;
    const std::string service = std::to_string(port);
    if (int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &found); rc != 0) {
        throw Error("bridge failure: cannot resolve " + host + ": " + ::gai_strerror(rc));
    }
    for (addrinfo* a = found; a; a = a->ai_next) {
        fd_ = ::socket(a->ai_family, a->ai_socktype | SOCK_CLOEXEC, a->ai_protocol);
        if (fd_ < 0) continue;
        if (::connect(fd_, a->ai_addr, a->ai_addrlen) == 0) break;
        ::close(fd_);
        fd_ = -1;
    }
    ::freeaddrinfo(found);
    if (fd_ < 0) io_failure("cannot connect to " + host + ":" + service);
}

TcpChannel::~TcpChannel() {
    if (fd_ >= 0) ::close(fd_);
}

std::string TcpChannel::round_trip(const std::string& line) {
    write_all(fd_, line + "\n", true);
    return read_line(fd_, buffer_, timeout_);
}

std::unique_ptr<LineChannel> open_channel(const std::string& address, std::chrono::milliseconds timeout) {
    constexpr std::string_view tcp = "tcp://";
    constexpr std::string_view stdio = "stdio:";
    if (address.starts_with(tcp)) {
        const std::string rest = address.substr(tcp.size());
        const auto colon = rest.rfind(':');
        if (colon == std::string::npos || colon == 0) throw InvalidArgument("invalid bridge address '" + address + "'");
        int port = 0;
        try {
            std::size_t used = 0;
            port = std::stoi(rest.substr(colon + 1), &used);
            if (used != rest.size() - colon - 1) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw InvalidArgument("invalid bridge port in '" + address + "'");
        }
        if (port <= 0 || port > 65535) throw InvalidArgument("invalid bridge port in '" + address + "'");
        std::string host = rest.substr(0, colon);
        if (host.size() > 2 && host.front() == '[' && host.back() == ']') host = host.substr(1, host.size() - 2);
        return std::make_unique<TcpChannel>(host, port, timeout);
    }
    std::string command = address.starts_with(stdio) ? address.substr(stdio.size()) : address;
    if (command.empty()) throw InvalidArgument("empty bridge command");
    return std::make_unique<SubprocessChannel>(command, timeout);
}

BridgePool::BridgePool(std::string address, int max_channels, std::chrono::milliseconds timeout)
    : address_(std::move(address)), max_channels_(max_channels), timeout_(timeout) {
    if (address_.empty()) throw InvalidArgument("empty bridge address");
    if (max_channels_ < 1) throw InvalidArgument("bridge pool needs at least one channel");
}

BridgeResponse BridgePool::call(const BridgeRequest& request) {
    std::unique_ptr<LineChannel> channel;
    {
        std::unique_lock lock(mutex_);
        available_.wait(lock, [&] { return !idle_.empty() || open_ < max_channels_; });
        if (!idle_.empty()) {
            channel = std::move(idle_.back());
            idle_.pop_back();
        } else {
            ++open_;
        }
    }
    auto give_back = [&](bool healthy) {
        std::lock_guard lock(mutex_);
        if (healthy) {
            idle_.push_back(std::move(channel));
        } else {
            channel.reset();
            --open_;
        }
        available_.notify_one();
    };
    try {
        if (!channel) channel = open_channel(address_, timeout_);
        BridgeResponse response = decode_response(channel->round_trip(encode(request)));
        give_back(true);
        return response;
    } catch (...) {
        give_back(false);
        throw;
    }
}

ExternalForecaster::ExternalForecaster(std::shared_ptr<BridgePool> pool, std::string model, int num_samples)
    : pool_(std::move(pool)), model_(std::move(model)), num_samples_(num_samples) {
    if (!pool_) throw InvalidArgument("external forecaster needs a bridge");
    if (num_samples_ < 1) throw InvalidArgument("invalid num_samples " + std::to_string(num_samples_));
}

ForecastResult ExternalForecaster::forecast(const DailySeries& context, int horizon_days, std::uint64_t seed) {
    if (horizon_days <= 0) throw InvalidArgument("insufficient horizon");
    BridgeRequest req;
    std::ostringstream id;
    id << model_ << '-' << format_date(context.start_date()) << '-' << context.size() << '-' << horizon_days << '-'
       << seed;
    req.id = id.str();
    req.model = model_;
    req.context = context.values();
    req.start_date = context.start_date();
    req.horizon = horizon_days;
    req.num_samples = num_samples_;
    req.seed = seed;

    const BridgeResponse resp = pool_->call(req);
    if (resp.id != req.id) throw Error("bridge failure: response id '" + resp.id + "' does not match '" + req.id + "'");
    if (!resp.ok) throw Error("fit failed: bridge model " + model_ + ": " + resp.message);
    if (resp.quantile_rows.size() != kNumQuantiles) {
        throw Error("bridge failure: expected 9 quantile rows, got " + std::to_string(resp.quantile_rows.size()));
    }
    const auto h = static_cast<std::size_t>(horizon_days);
    std::vector<double> values;
    values.reserve(kNumQuantiles * h);
    for (const auto& row : resp.quantile_rows) {
        if (row.size() != h) {
            throw Error("bridge failure: quantile row has " + std::to_string(row.size()) + " values, expected " +
                        std::to_string(h));
        }
        values.insert(values.end(), row.begin(), row.end());
    }
    QuantileForecast q(add_days(context.end_date(), 1), h, std::move(values));
    return {q.clamped_non_negative(), "bridge=" + pool_->address() + " model=" + model_};
}

}  // namespace horizonbench
