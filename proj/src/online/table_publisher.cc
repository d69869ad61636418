/******************************************************************************
 * Copyright 2026 The Autocalib Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *****************************************************************************/

#include "autocalib/online/table_publisher.h"

#include <atomic>
#include <utility>

namespace autocalib {
namespace online {

TablePublisher::TablePublisher(table::CalibrationTable initial)
    : snapshot_(std::make_shared<const TableSnapshot>(std::move(initial), 0)) {}

std::shared_ptr<const TableSnapshot> TablePublisher::Current() const {
  return std::atomic_load_explicit(&snapshot_, std::memory_order_acquire);
}

std::uint64_t TablePublisher::Publish(table::CalibrationTable table) {
  const std::uint64_t revision = Current()->revision + 1;
  auto next = std::make_shared<const TableSnapshot>(std::move(table), revision);
  std::atomic_store_explicit(&snapshot_,
                             std::shared_ptr<const TableSnapshot>(next),
                             std::memory_order_release);
  return revision;
}

}  // namespace online
}  // namespace autocalib
