//! Line-oriented helpers shared by the HG, HGON, HP and LAT readers.

use std::str::FromStr;

use crate::error::{Error, Result};

/// Iterates over content lines, skipping blank lines and `#` comments.
/// Line numbers are 1-based and refer to the original text.
pub(crate) struct ContentLines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last_line: usize,
}

impl<'a> ContentLines<'a> {
    pub(crate) fn new(text: &'a str) -> Self {
        ContentLines {
            inner: text.lines().enumerate(),
            last_line: 0,
        }
    }

    pub(crate) fn next_line(&mut self) -> Option<(usize, &'a str)> {
        for (i, raw) in self.inner.by_ref() {
            self.last_line = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            return Some((i + 1, line));
        }
        None
    }

    /// Next content line, or a parse error naming what was expected.
    pub(crate) fn expect_line(&mut self, what: &str) -> Result<(usize, &'a str)> {
        let last = self.last_line;
        self.next_line()
            .ok_or_else(|| Error::parse(last + 1, format!("unexpected end of input, expected {what}")))
    }

    pub(crate) fn expect_end(&mut self) -> Result<()> {
        match self.next_line() {
            None => Ok(()),
            Some((line, _)) => Err(Error::parse(line, "unexpected trailing content")),
        }
    }
}

pub(crate) fn parse_field<T: FromStr>(line: usize, token: &str, what: &str) -> Result<T> {
    token
        .parse()
        .map_err(|_| Error::parse(line, format!("invalid {what} `{token}`")))
}

/// Splits a header line `TAG a b c ...` and checks the tag and field count.
pub(crate) fn header<'a>(
    line: usize,
    text: &'a str,
    tag: &str,
    fields: usize,
) -> Result<Vec<&'a str>> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    if tokens.first() != Some(&tag) || tokens.len() != fields + 1 {
        return Err(Error::parse(
            line,
            format!("malformed header, expected `{tag}` followed by {fields} fields"),
        ));
    }
    Ok(tokens[1..].to_vec())
}
