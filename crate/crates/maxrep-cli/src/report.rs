//! CSV tables and number formatting.

/// Formats `x` with 12 significant digits, dropping trailing zeros.
pub fn num(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        trim_zeros(&format!("{:.*}", (11 - exp) as usize, x))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// A comma-separated table with a header row.
#[derive(Debug, Clone, Default)]
pub struct Csv {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Csv {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Csv { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.join(","));
            s.push('\n');
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(num(1.0), "1");
        assert_eq!(num(-2.5), "-2.5");
        assert_eq!(num(std::f64::consts::PI), "3.14159265359");
        assert_eq!(num(1.0 / 3.0), "0.333333333333");
        assert_eq!(num(123456.0), "123456");
        assert_eq!(num(1.0e-7), "1e-7");
        assert_eq!(num(6.02214076e23), "6.02214076e23");
        assert_eq!(num(0.0), "0");
        assert_eq!(num(9.9999999999999), "10");
    }

    #[test]
    fn csv_is_newline_terminated() {
        let mut c = Csv::new(["a", "b"]);
        c.push(vec!["1".into(), "2".into()]);
        assert_eq!(c.render(), "a,b\n1,2\n");
    }
}
