//! Fixed CSV output: nine significant digits, `.` decimal point, `\n` line
//! endings.

use qregion_core::capacity::RatePoint;

const SIG_DIGITS: usize = 9;

/// `%.9g`-style rendering: fixed notation for decimal exponents in
/// `[-4, 9)`, scientific otherwise, trailing zeros dropped.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..SIG_DIGITS as i32).contains(&exp) {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim(&format!("{x:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim(mantissa), exp.abs())
    }
}

fn trim(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// A CSV table with a header row.
pub struct Table {
    out: String,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        let mut out = header.join(",");
        out.push('\n');
        Self { out }
    }

    pub fn row(&mut self, cells: &[f64]) {
        let cells: Vec<String> = cells.iter().map(|&c| fmt_num(c)).collect();
        self.out.push_str(&cells.join(","));
        self.out.push('\n');
    }

    pub fn rate_row(&mut self, key: f64, p: &RatePoint) {
        self.row(&[key, p.r, p.r_prime]);
    }

    pub fn finish(self) -> String {
        self.out
    }
}

/// Two-column `field,value` report.
#[derive(Default)]
pub struct Report {
    out: String,
}

impl Report {
    pub fn new() -> Self {
        Self { out: "field,value\n".into() }
    }

    pub fn text(&mut self, field: &str, value: &str) -> &mut Self {
        self.out.push_str(field);
        self.out.push(',');
        self.out.push_str(value);
        self.out.push('\n');
        self
    }

    pub fn num(&mut self, field: &str, value: f64) -> &mut Self {
        self.text(field, &fmt_num(value))
    }

    pub fn int(&mut self, field: &str, value: usize) -> &mut Self {
        self.text(field, &value.to_string())
    }

    pub fn flag(&mut self, field: &str, value: bool) -> &mut Self {
        self.text(field, if value { "true" } else { "false" })
    }

    pub fn finish(&self) -> String {
        self.out.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        let cases = [
            (0.0, "0"),
            (-0.0, "0"),
            (1.0, "1"),
            (2.0, "2"),
            (0.5, "0.5"),
            (0.1887218755408671, "0.188721876"),
            (0.451205059304601, "0.451205059"),
            (-0.548795, "-0.548795"),
            (1.0 / 3.0, "0.333333333"),
            (123456789.0, "123456789"),
            (1234567890.0, "1.23456789e+09"),
            (0.0001, "0.0001"),
            (0.00001234, "1.234e-05"),
            (1e-12, "1e-12"),
            (0.9999999999, "1"),
            (0.37, "0.37"),
        ];
        for (x, want) in cases {
            assert_eq!(fmt_num(x), want, "{x}");
        }
    }

    #[test]
    fn tables_use_newlines() {
        let mut t = Table::new(&["lambda", "R", "Rprime"]);
        t.row(&[0.5, 0.5, 1.0]);
        assert_eq!(t.finish(), "lambda,R,Rprime\n0.5,0.5,1\n");
        let mut r = Report::new();
        r.num("value", 0.25).flag("converged", true);
        assert_eq!(r.finish(), "field,value\nvalue,0.25\nconverged,true\n");
    }
}
