#pragma once
#ifndef NDSEC_NETSIM_HPP
#define NDSEC_NETSIM_HPP

// Deterministic in-memory link. Frames are delivered to each recipient at
// send_time + recipient latency; ties run in insertion order.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <queue>
#include <string>
#include <vector>

#include "ndsec/address.hpp"
#include "ndsec/error.hpp"
#include "ndsec/ndp_codec.hpp"

namespace ndsec {

using Tick = std::uint64_t;

inline constexpr std::size_t default_frame_overhead = 54;  // Ethernet (14) + IPv6 (40)

struct SimFrame {
    MacAddress src_mac;
    MacAddress dst_mac;
    Ipv6Address src_ip;
    Ipv6Address dst_ip;
    std::vector<std::uint8_t> payload;
    Tick send_time = 0;
    Tick deliver_time = 0;
};

/// Anything attached to the link: honest nodes and the adversary.
class Endpoint {
public:
    virtual ~Endpoint() = default;

    virtual Ipv6Address ip() const = 0;
    virtual MacAddress mac() const = 0;
    /// Promiscuous endpoints see every frame, not just multicast and their own unicast.
    virtual bool promiscuous() const { return false; }

    /// Returns frames to transmit now. `message` is the already-verified decode of frame.payload.
    virtual std::vector<SimFrame> on_frame(const SimFrame& frame, const NdpMessage& message, Tick now) = 0;
    /// Called on every clock step that touches this endpoint.
    virtual void on_clock(Tick /*now*/) {}
};

struct NodeHandle {
    std::size_t index = 0;
    friend auto operator<=>(const NodeHandle&, const NodeHandle&) = default;
};

struct NodeCounters {
    std::string name;
    std::uint64_t frames_out = 0;
    std::uint64_t frames_in = 0;
    std::uint64_t bytes_out = 0;
    std::uint64_t bytes_in = 0;

    friend bool operator==(const NodeCounters&, const NodeCounters&) = default;
};

struct TrafficCounters {
    std::vector<NodeCounters> nodes;
    std::map<std::string, std::uint64_t> frames_by_type;  // "135", "136", "200", "201", "malformed"
    std::uint64_t total_frames = 0;                       // frames sent
    std::uint64_t total_bytes = 0;                        // bytes sent
    std::uint64_t deliveries = 0;
    std::uint64_t malformed_dropped = 0;

    friend bool operator==(const TrafficCounters&, const TrafficCounters&) = default;
};

struct TraceRecord {
    Tick tick = 0;
    Ipv6Address src_ip;
    Ipv6Address dst_ip;
    std::uint8_t type = 0;
    std::uint8_t code = 0;
    std::size_t size = 0;
    NodeHandle recipient;

    friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

class Simulator {
public:
    using SendObserver = std::function<void(NodeHandle sender, const SimFrame&, const NdpMessage&)>;

    explicit Simulator(std::size_t frame_overhead = default_frame_overhead) : frame_overhead_(frame_overhead) {}

    Simulator(const Simulator&) = delete;
    Simulator& operator=(const Simulator&) = delete;

    NodeHandle attach(std::unique_ptr<Endpoint> endpoint, Tick latency, std::string name = {})
    {
        for (const auto& a : attached_) {
            if (a.endpoint->ip() == endpoint->ip())
                throw ConfigError({"attach: duplicate IP " + endpoint->ip().to_string()});
            if (a.endpoint->mac() == endpoint->mac())
                throw ConfigError({"attach: duplicate MAC " + endpoint->mac().to_string()});
        }
        NodeHandle h{attached_.size()};
        if (name.empty()) name = "node" + std::to_string(h.index);
        counters_.nodes.push_back(NodeCounters{name});
        attached_.push_back(Attachment{std::move(endpoint), latency});
        return h;
    }

    template <typename T, typename... Args>
    NodeHandle emplace(Tick latency, std::string name, Args&&... args)
    {
        return attach(std::make_unique<T>(std::forward<Args>(args)...), latency, std::move(name));
    }

    Endpoint& endpoint(NodeHandle h) { return *attached_.at(h.index).endpoint; }
    const Endpoint& endpoint(NodeHandle h) const { return *attached_.at(h.index).endpoint; }

    template <typename T>
    T& get(NodeHandle h)
    {
        return dynamic_cast<T&>(endpoint(h));
    }

    std::size_t size() const noexcept { return attached_.size(); }
    Tick now() const noexcept { return now_; }
    Tick latency(NodeHandle h) const { return attached_.at(h.index).latency; }
    std::size_t frame_overhead() const noexcept { return frame_overhead_; }

    const TrafficCounters& counters() const noexcept { return counters_; }
    const std::vector<TraceRecord>& trace() const noexcept { return trace_; }

    void on_send(SendObserver observer) { observers_.push_back(std::move(observer)); }

    /// Transmits `frame` from `sender` at the current tick.
    void send(NodeHandle sender, SimFrame frame)
    {
        frame.send_time = now_;
        frame.deliver_time = now_;
        const std::uint64_t size = frame.payload.size() + frame_overhead_;

        auto& out = counters_.nodes.at(sender.index);
        out.frames_out += 1;
        out.bytes_out += size;
        counters_.total_frames += 1;
        counters_.total_bytes += size;

        NdpMessage message;
        try {
            message = decode(frame.payload, frame.src_ip, frame.dst_ip);
        } catch (const CodecError&) {
            counters_.frames_by_type["malformed"] += 1;
            counters_.malformed_dropped += 1;
            return;
        }
        counters_.frames_by_type[std::to_string(message_type(message))] += 1;
        for (auto& obs : observers_) obs(sender, frame, message);

        auto shared = std::make_shared<const InFlight>(InFlight{std::move(frame), std::move(message)});
        const bool multicast = shared->frame.dst_ip.is_multicast();
        for (std::size_t i = 0; i < attached_.size(); ++i) {
            if (i == sender.index) continue;
            const auto& a = attached_[i];
            const bool addressed = multicast || a.endpoint->ip() == shared->frame.dst_ip;
            if (!addressed && !a.endpoint->promiscuous()) continue;
            push(Event{now_ + a.latency, next_seq_++, NodeHandle{i}, shared});
        }
    }

    /// Wakes `target` at tick `at` (used for resolution deadlines).
    void schedule_timer(NodeHandle target, Tick at) { push(Event{std::max(at, now_), next_seq_++, target, nullptr}); }

    bool idle() const noexcept { return queue_.empty(); }

    /// Processes events in (deliver_time, insertion) order up to and including `until`.
    const TrafficCounters& run(Tick until = std::numeric_limits<Tick>::max())
    {
        while (!queue_.empty() && queue_.top().time <= until) {
            Event ev = queue_.top();
            queue_.pop();
            now_ = ev.time;
            auto& a = attached_[ev.target.index];
            a.endpoint->on_clock(now_);
            if (!ev.frame) continue;

            SimFrame copy = ev.frame->frame;
            copy.deliver_time = now_;
            const std::uint64_t size = copy.payload.size() + frame_overhead_;
            auto& in = counters_.nodes[ev.target.index];
            in.frames_in += 1;
            in.bytes_in += size;
            counters_.deliveries += 1;
            trace_.push_back(TraceRecord{now_, copy.src_ip, copy.dst_ip, message_type(ev.frame->message),
                                         message_code(ev.frame->message), static_cast<std::size_t>(size),
                                         ev.target});

            for (auto& reply : a.endpoint->on_frame(copy, ev.frame->message, now_)) send(ev.target, std::move(reply));
        }
        return counters_;
    }

    /// CSV: tick,src_ip,dst_ip,type,code,size. One line per delivery.
    void write_trace_csv(std::ostream& os) const
    {
        os << "tick,src_ip,dst_ip,type,code,size\n";
        for (const auto& r : trace_)
            os << r.tick << ',' << r.src_ip << ',' << r.dst_ip << ',' << int{r.type} << ',' << int{r.code} << ','
               << r.size << '\n';
    }

private:
    struct InFlight {
        SimFrame frame;
        NdpMessage message;
    };

    struct Event {
        Tick time;
        std::uint64_t seq;
        NodeHandle target;
        std::shared_ptr<const InFlight> frame;  // null for timers
    };

    struct Later {
        bool operator()(const Event& a, const Event& b) const
        {
            return a.time != b.time ? a.time > b.time : a.seq > b.seq;
        }
    };

    struct Attachment {
        std::unique_ptr<Endpoint> endpoint;
        Tick latency;
    };

    void push(Event ev) { queue_.push(std::move(ev)); }

    std::size_t frame_overhead_;
    std::vector<Attachment> attached_;
    std::priority_queue<Event, std::vector<Event>, Later> queue_;
    std::vector<SendObserver> observers_;
    std::vector<TraceRecord> trace_;
    TrafficCounters counters_;
    Tick now_ = 0;
    std::uint64_t next_seq_ = 0;
};

}  // namespace ndsec

#endif  // NDSEC_NETSIM_HPP
