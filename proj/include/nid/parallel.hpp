#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <stop_token>
#include <thread>
#include <vector>
#include <deque>

namespace nid {

/// Result slot of one job: a value or the exception the job raised.
template <class T>
struct Outcome {
    std::optional<T> value;
    std::exception_ptr error;

    bool ok() const { return value.has_value(); }
    const T& get() const
    {
        if (error) std::rethrow_exception(error);
        return *value;
    }
};

/// Shared job list with an atomic claim cursor. Every index in [0, size)
/// is handed out exactly once.
class JobQueue {
public:
    explicit JobQueue(std::size_t size) : size_(size) {}

    std::optional<std::size_t> claim()
    {
        const std::size_t k = next_.fetch_add(1, std::memory_order_relaxed);
        if (k >= size_) return std::nullopt;
        return k;
    }

    std::size_t size() const { return size_; }

private:
    std::size_t size_;
    std::atomic<std::size_t> next_{0};
};

/// Work crew of p workers over a shared job queue: idle workers claim the
/// next job immediately. results[i] belongs to jobs[i]. With p = 1 the jobs
/// run inline, in order.
template <class Job, class Fn>
auto work_crew(const std::vector<Job>& jobs, std::size_t p, Fn worker)
    -> std::vector<Outcome<std::invoke_result_t<Fn&, const Job&, std::size_t>>>
{
    using T = std::invoke_result_t<Fn&, const Job&, std::size_t>;
    if (p == 0) throw std::invalid_argument("work_crew: need at least one worker");
    std::vector<Outcome<T>> results(jobs.size());
    JobQueue queue(jobs.size());
    auto run = [&] {
        while (auto k = queue.claim()) {
            try {
                results[*k].value.emplace(worker(jobs[*k], *k));
            } catch (...) {
                results[*k].error = std::current_exception();
            }
        }
    };
    if (p == 1 || jobs.size() <= 1) {
        run();
        return results;
    }
    {
        std::vector<std::jthread> crew;
        const std::size_t extra = std::min(p, jobs.size()) - 1;
        for (std::size_t w = 0; w < extra; ++w) crew.emplace_back(run);
        run();
    }
    return results;
}

/// Values of all outcomes; rethrows the first stored error.
template <class T>
std::vector<T> values_or_throw(std::vector<Outcome<T>>&& outcomes)
{
    std::vector<T> v;
    v.reserve(outcomes.size());
    for (auto& o : outcomes) {
        if (o.error) std::rethrow_exception(o.error);
        v.push_back(std::move(*o.value));
    }
    return v;
}

/// Bounded multi-producer multi-consumer queue with back-pressure.
template <class T>
class BoundedQueue {
public:
    explicit BoundedQueue(std::size_t capacity) : capacity_(capacity)
    {
        if (capacity == 0) throw std::invalid_argument("BoundedQueue: capacity must be positive");
    }

    /// Blocks while full. Returns false if the queue was closed.
    bool push(T item)
    {
        std::unique_lock lock(mutex_);
        not_full_.wait(lock, [&] { return closed_ || items_.size() < capacity_; });
        if (closed_) return false;
        items_.push_back(std::move(item));
        not_empty_.notify_one();
        return true;
    }

    /// Blocks while empty and open; nullopt once closed and drained.
    std::optional<T> pop()
    {
        std::unique_lock lock(mutex_);
        not_empty_.wait(lock, [&] { return closed_ || !items_.empty(); });
        if (items_.empty()) return std::nullopt;
        T item = std::move(items_.front());
        items_.pop_front();
        not_full_.notify_one();
        return item;
    }

    void close()
    {
        std::lock_guard lock(mutex_);
        closed_ = true;
        not_empty_.notify_all();
        not_full_.notify_all();
    }

    std::size_t capacity() const { return capacity_; }

private:
    std::size_t capacity_;
    std::mutex mutex_;
    std::condition_variable not_full_;
    std::condition_variable not_empty_;
    std::deque<T> items_;
    bool closed_ = false;
};

struct PipelineConfig {
    std::size_t p = 2;
    std::size_t capacity = 64;

    void validate() const
    {
        if (p < 2) throw std::invalid_argument("pipeline: need p >= 2 (one producer, at least one consumer)");
        if (capacity == 0) throw std::invalid_argument("pipeline: queue capacity must be positive");
    }
};

struct PipelineStats {
    std::size_t produced = 0;
    double producer_seconds = 0.0;
    /// Time the producer spent blocked on a full queue.
    double producer_idle = 0.0;
    /// Per consumer: time spent waiting on an empty queue.
    std::vector<double> consumer_idle;
    double makespan = 0.0;
    /// Item index whose consumption began before the producer finished, if any.
    std::optional<std::size_t> overlap_item;
};

template <class R>
struct PipelineResult {
    /// Indexed by production order.
    std::vector<Outcome<R>> results;
    PipelineStats stats;
    std::exception_ptr producer_error;
};

/// Two-stage pipeline: one producer feeds a bounded queue,
/// p - 1 consumers process items as soon as they appear. The producer
/// receives an emit function (returning false once the run is cancelled)
/// and a stop token. A producer error closes the queue; consumers drain
/// what was produced.
template <class Item, class Consume>
auto pipeline_run(const std::function<void(const std::function<bool(Item)>&, std::stop_token)>& producer,
                  Consume consumer, const PipelineConfig& cfg, std::stop_token stop = {})
    -> PipelineResult<std::invoke_result_t<Consume&, const Item&, std::size_t>>
{
    using R = std::invoke_result_t<Consume&, const Item&, std::size_t>;
    using clock = std::chrono::steady_clock;
    cfg.validate();
    struct Indexed {
        std::size_t index;
        Item item;
    };
    BoundedQueue<Indexed> queue(cfg.capacity);
    PipelineResult<R> out;
    out.stats.consumer_idle.assign(cfg.p - 1, 0.0);
    std::mutex result_mutex;
    std::atomic<bool> producing{true};
    std::optional<std::size_t> overlap;
    const auto t0 = clock::now();

    auto consume = [&](std::size_t who) {
        double idle = 0.0;
        while (true) {
            const auto w0 = clock::now();
            auto next = queue.pop();
            idle += std::chrono::duration<double>(clock::now() - w0).count();
            if (!next) break;
            const bool early = producing.load();
            Outcome<R> o;
            try {
                o.value.emplace(consumer(next->item, next->index));
            } catch (...) {
                o.error = std::current_exception();
            }
            std::lock_guard lock(result_mutex);
            if (early && !overlap) overlap = next->index;
            if (out.results.size() <= next->index) out.results.resize(next->index + 1);
            out.results[next->index] = std::move(o);
        }
        out.stats.consumer_idle[who] = idle;
    };

    {
        std::vector<std::jthread> consumers;
        for (std::size_t c = 0; c + 1 < cfg.p; ++c) consumers.emplace_back(consume, c);
        std::size_t count = 0;
        double blocked = 0.0;
        std::function<bool(Item)> emit = [&](Item item) {
            if (stop.stop_requested()) return false;
            const auto b0 = clock::now();
            const bool ok = queue.push(Indexed{count, std::move(item)});
            blocked += std::chrono::duration<double>(clock::now() - b0).count();
            if (ok) ++count;
            return ok;
        };
        try {
            producer(emit, stop);
        } catch (...) {
            out.producer_error = std::current_exception();
        }
        producing = false;
        out.stats.produced = count;
        out.stats.producer_seconds = std::chrono::duration<double>(clock::now() - t0).count();
        out.stats.producer_idle = blocked;
        queue.close();
    }
    out.results.resize(out.stats.produced);
    out.stats.makespan = std::chrono::duration<double>(clock::now() - t0).count();
    out.stats.overlap_item = overlap;
    return out;
}

} // namespace nid
