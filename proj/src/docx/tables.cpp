#include <optional>

#include "dh/docx/internal.hpp"

namespace dh::docx::internal {

namespace {

int grid_span_of(const xml::Node& tc) {
    if (const auto* tc_pr = tc.child("w:tcPr")) {
        if (const auto* span = tc_pr->child("w:gridSpan")) {
            if (auto val = span->attr("w:val")) {
                try {
                    int n = std::stoi(std::string(*val));
                    if (n >= 1) return n;
                } catch (...) {
                }
            }
        }
    }
    return 1;
}

enum class VMerge { None, Restart, Continue };

VMerge vmerge_of(const xml::Node& tc) {
    if (const auto* tc_pr = tc.child("w:tcPr")) {
        if (const auto* vm = tc_pr->child("w:vMerge")) {
            auto val = vm->attr("w:val");
            if (!val || *val == "continue") return VMerge::Continue;
            if (*val == "restart") return VMerge::Restart;
        }
    }
    return VMerge::None;
}

bool row_is_header(const xml::Node& tr) {
    if (const auto* tr_pr = tr.child("w:trPr"))
        if (tr_pr->child("w:tblHeader")) return true;
    return false;
}

}  // namespace

std::optional<TableModel> parse_table_model(const xml::Node& tbl,
                                            const std::vector<std::size_t>& tbl_path,
                                            const TextExtractor& cell_text) {
    TableModel model;
    model.xml_locator = xml::join_path(tbl_path);

    // Grid occupancy: owners[col] is the cell (by index into model.cells)
    // whose vertical merge is still open at that column.
    std::vector<int> prev_row_cells;   // cell index occupying each column in the previous row
    int row_index = 0;

    for (std::size_t child_idx = 0; child_idx < tbl.children.size(); ++child_idx) {
        const xml::Node& tr = tbl.children[child_idx];
        if (tr.name != "w:tr") continue;
        const bool header = row_is_header(tr);
        model.header_rows.push_back(header);

        std::vector<int> this_row_cells;
        int col = 0;
        for (std::size_t cell_idx = 0; cell_idx < tr.children.size(); ++cell_idx) {
            const xml::Node& tc = tr.children[cell_idx];
            if (tc.name != "w:tc") continue;
            const int span = grid_span_of(tc);
            const VMerge vm = vmerge_of(tc);
            if (vm == VMerge::Continue) {
                if (col >= int(prev_row_cells.size()) || prev_row_cells[std::size_t(col)] < 0)
                    return std::nullopt;  // continuation with nothing above
                int owner = prev_row_cells[std::size_t(col)];
                TableCellModel& owner_cell = model.cells[std::size_t(owner)];
                if (owner_cell.col_index != col || owner_cell.col_span != span)
                    return std::nullopt;  // merge does not line up with the grid
                // Extend the owner only when this is the first continuation row.
                if (owner_cell.row_index + owner_cell.row_span == row_index)
                    owner_cell.row_span += 1;
                for (int k = 0; k < span; ++k) this_row_cells.push_back(owner);
                col += span;
                continue;
            }
            TableCellModel cell;
            cell.cell_id = int(model.cells.size());
            cell.row_index = row_index;
            cell.col_index = col;
            cell.col_span = span;
            cell.row_span = 1;
            cell.is_header_cell = header;
            cell.text = cell_text(tc);
            auto path = tbl_path;
            path.push_back(child_idx);
            path.push_back(cell_idx);
            cell.xml_locator = xml::join_path(path);
            for (int k = 0; k < span; ++k) this_row_cells.push_back(cell.cell_id);
            model.cells.push_back(std::move(cell));
            col += span;
        }
        if (this_row_cells.empty()) return std::nullopt;  // row without cells
        model.cols = std::max(model.cols, col);
        prev_row_cells = std::move(this_row_cells);
        ++row_index;
    }
    model.rows = row_index;
    if (model.rows == 0 || model.cols == 0) return std::nullopt;

    // Occupancy check: expanded spans must tile without overlap.
    std::vector<std::vector<int>> occupied(std::size_t(model.rows),
                                           std::vector<int>(std::size_t(model.cols), -1));
    for (const auto& cell : model.cells) {
        for (int r = cell.row_index; r < cell.row_index + cell.row_span; ++r) {
            for (int c = cell.col_index; c < cell.col_index + cell.col_span; ++c) {
                if (r >= model.rows || c >= model.cols) return std::nullopt;
                if (occupied[std::size_t(r)][std::size_t(c)] != -1) return std::nullopt;
                occupied[std::size_t(r)][std::size_t(c)] = cell.cell_id;
            }
        }
    }
    return model;
}

}  // namespace dh::docx::internal
