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

/**
 * @file table_publisher.h
 * @brief Single-writer, many-reader publication of calibration tables.
 */

#pragma once

#include <cstdint>
#include <memory>

#include "autocalib/table/calibration_table.h"
#include "autocalib/table/inverse_view.h"

namespace autocalib {
namespace online {

/// Immutable table plus its inverse and revision id.
struct TableSnapshot {
  TableSnapshot(table::CalibrationTable t, std::uint64_t rev)
      : table(std::move(t)), inverse(table), revision(rev) {}

  const table::CalibrationTable table;
  const table::InverseTableView inverse;
  const std::uint64_t revision;
};

/**
 * @brief Holds the controller-visible table.
 *
 * Publish swaps in a whole new snapshot; readers keep whatever snapshot they
 * loaded, so a reader sees either the old or the new table and never a mix.
 * Only one thread may call Publish.
 */
class TablePublisher {
 public:
  explicit TablePublisher(table::CalibrationTable initial);

  std::shared_ptr<const TableSnapshot> Current() const;

  /// Throws MonotonicityViolation for a table that cannot be inverted.
  /// Returns the new revision id.
  std::uint64_t Publish(table::CalibrationTable table);

 private:
  std::shared_ptr<const TableSnapshot> snapshot_;
};

}  // namespace online
}  // namespace autocalib
