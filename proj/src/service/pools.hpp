#pragma once

#include <boost/asio/thread_pool.hpp>

#include <algorithm>

#include "tmvis/service/service.hpp"

namespace tmvis::service {

struct Service::Pools {
  Pools(std::size_t job_workers, std::size_t render_workers)
      : jobs(std::max<std::size_t>(1, job_workers)),
        renders(std::max<std::size_t>(1, render_workers)) {}
  boost::asio::thread_pool jobs;
  boost::asio::thread_pool renders;
};

}  // namespace tmvis::service
