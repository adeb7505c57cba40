//! Character-grid scene summaries for prompting with spatial patterns.

use super::LlmError;

/// A symbolic board layout: rectangular character rows, a legend covering
/// every non-space character, and the physical cell pitch.
#[derive(Debug, Clone, PartialEq)]
pub struct BoardGrid {
    rows: Vec<String>,
    legend: Vec<(char, String)>,
    pitch_m: f64,
}

impl BoardGrid {
    pub fn new(
        rows: Vec<String>,
        legend: Vec<(char, String)>,
        pitch_m: f64,
    ) -> Result<Self, LlmError> {
        if rows.is_empty() {
            return Err(LlmError::InvalidGrid("no rows".into()));
        }
        let width = rows[0].chars().count();
        for (i, row) in rows.iter().enumerate() {
            if row.chars().count() != width {
                return Err(LlmError::InvalidGrid(format!(
                    "row {i} has {} cells, expected {width}",
                    row.chars().count()
                )));
            }
        }
        for (i, row) in rows.iter().enumerate() {
            for c in row.chars() {
                if c != ' ' && !legend.iter().any(|(k, _)| *k == c) {
                    return Err(LlmError::InvalidGrid(format!(
                        "row {i} holds `{c}` which the legend does not cover"
                    )));
                }
            }
        }
        if !(pitch_m.is_finite() && pitch_m > 0.0) {
            return Err(LlmError::InvalidGrid(format!("bad pitch {pitch_m}")));
        }
        Ok(BoardGrid {
            rows,
            legend,
            pitch_m,
        })
    }

    /// The routing-board layout used by the cable tasks: a cable path wrapped
    /// around two screws, the channel component, and start pose 1.
    pub fn routing_board() -> Self {
        BoardGrid::new(
            vec![
                "    B".to_string(),
                "ccc c".to_string(),
                "cscsc".to_string(),
                "c ccc".to_string(),
                "1    ".to_string(),
            ],
            vec![
                ('c', "the path of the cable".to_string()),
                ('s', "a screw".to_string()),
                ('B', "the plastic channel component the cable routes through".to_string()),
                ('1', "start pose 1".to_string()),
            ],
            0.03,
        )
        .expect("builtin board is well formed")
    }
}

/// Render the grid with its legend and pitch sentence for prompt inclusion.
pub fn render_board(grid: &BoardGrid) -> String {
    let mut out = String::from("Here is the board layout:\n");
    for row in &grid.rows {
        out.push_str(row);
        out.push('\n');
    }
    out.push('\n');
    for (symbol, meaning) in &grid.legend {
        out.push_str(&format!("`{symbol}` is {meaning}.\n"));
    }
    out.push_str(&format!(
        "\nx translations move left to right and y translations move bottom to top. \
         The distance between screws is {}M.\n",
        grid.pitch_m
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn routing_board_renders_its_rows() {
        let text = render_board(&BoardGrid::routing_board());
        assert!(text.contains("ccc c"));
        assert!(text.contains("cscsc"));
        assert!(text.contains("0.03M"));
    }

    #[test]
    fn single_cell_grid() {
        let grid = BoardGrid::new(
            vec!["c".to_string()],
            vec![('c', "cable".to_string())],
            0.03,
        )
        .unwrap();
        let text = render_board(&grid);
        assert!(text.contains("c\n"));
        assert!(text.contains("`c` is cable."));
    }

    #[test]
    fn ragged_rows_rejected() {
        let err = BoardGrid::new(
            vec!["cc".to_string(), "c".to_string()],
            vec![('c', "cable".to_string())],
            0.03,
        );
        assert!(matches!(err, Err(LlmError::InvalidGrid(_))));
    }

    #[test]
    fn uncovered_symbol_rejected() {
        let err = BoardGrid::new(vec!["cx".to_string()], vec![('c', "cable".to_string())], 0.03);
        assert!(matches!(err, Err(LlmError::InvalidGrid(_))));
    }
}
