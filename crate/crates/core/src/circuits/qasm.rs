use std::fmt::Write;

use super::ir::Circuit;
use crate::qcore::{Gate, GateKind};
use crate::{Error, Result};

const STEP_MARK: &str = "// step";

/// OpenQASM 2.0 text over `{h, x, ry, rz, cx}`. Barriers become
/// `barrier q;` and step marks become `// step` comments, both of which
/// [`parse_qasm`] restores. Angles use the shortest round-trip decimal
/// form, so no precision is lost.
pub fn export_qasm(c: &Circuit) -> Result<String> {
    let mut out = String::new();
    if !c.meta.name.is_empty() {
        let _ = writeln!(out, "// {}", c.meta.name);
    }
    out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    let _ = writeln!(out, "qreg q[{}];", c.n_qubits());
    let (mut b, mut s) = (
        c.barriers().iter().peekable(),
        c.step_marks().iter().peekable(),
    );
    for i in 0..=c.len() {
        while s.next_if(|&&m| m == i).is_some() {
            let _ = writeln!(out, "{STEP_MARK}");
        }
        while b.next_if(|&&m| m == i).is_some() {
            out.push_str("barrier q;\n");
        }
        let Some(op) = c.ops().get(i) else { break };
        let t = &op.targets;
        match op.gate.kind() {
            GateKind::H => writeln!(out, "h q[{}];", t[0]),
            GateKind::X => writeln!(out, "x q[{}];", t[0]),
            GateKind::Ry(a) => writeln!(out, "ry({a:?}) q[{}];", t[0]),
            GateKind::Rz(a) => writeln!(out, "rz({a:?}) q[{}];", t[0]),
            GateKind::Cnot => writeln!(out, "cx q[{}],q[{}];", t[0], t[1]),
            _ => return Err(Error::UnsupportedGate(op.gate.name().to_string())),
        }
        .expect("writing to a String cannot fail");
    }
    Ok(out)
}

/// Parses the subset written by [`export_qasm`]. Angle arguments may be
/// arithmetic expressions over numbers and `pi`.
pub fn parse_qasm(text: &str) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    let mut saw_header = false;
    let mut name = String::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let err = |message: String| Error::QasmParse {
            line: line_no,
            message,
        };
        let trimmed = raw.trim();
        if trimmed == STEP_MARK {
            circuit
                .as_mut()
                .ok_or_else(|| err("step mark before qreg".into()))?
                .mark_step();
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix("//") {
            if !saw_header && name.is_empty() {
                name = comment.trim().to_string();
            }
            continue;
        }
        let code = trimmed.split("//").next().unwrap_or("");
        for stmt in code.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            if !saw_header {
                if stmt.split_whitespace().collect::<Vec<_>>() != ["OPENQASM", "2.0"] {
                    return Err(err(format!("expected `OPENQASM 2.0;`, found `{stmt}`")));
                }
                saw_header = true;
                continue;
            }
            if stmt.starts_with("include") {
                continue;
            }
            if let Some(rest) = stmt.strip_prefix("qreg") {
                if circuit.is_some() {
                    return Err(err("only one register supported".into()));
                }
                let n = parse_index(rest.trim(), "q").map_err(err)?;
                circuit = Some(Circuit::new(n, name.clone()));
                continue;
            }
            let c = circuit
                .as_mut()
                .ok_or_else(|| err("gate before qreg declaration".into()))?;
            if stmt.starts_with("barrier") {
                c.barrier();
                continue;
            }
            let (gate, args) = parse_gate(stmt).map_err(err)?;
            let targets = args
                .split(',')
                .map(|a| parse_index(a.trim(), "q"))
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(err)?;
            c.push(gate, &targets).map_err(|e| err(e.to_string()))?;
        }
    }
    circuit.ok_or(Error::QasmParse {
        line: text.lines().count(),
        message: "no qreg declaration".into(),
    })
}

fn parse_gate(stmt: &str) -> std::result::Result<(Gate, &str), String> {
    let (head, args) = match stmt.find(')') {
        Some(close) => stmt.split_at(close + 1),
        None => stmt
            .split_once(char::is_whitespace)
            .ok_or_else(|| format!("missing operands in `{stmt}`"))?,
    };
    let (name, param) = match head.split_once('(') {
        Some((n, p)) => (n.trim(), Some(p.trim_end_matches(')'))),
        None => (head.trim(), None),
    };
    let angle = || -> std::result::Result<f64, String> {
        let p = param.ok_or_else(|| format!("`{name}` needs an angle"))?;
        eval_angle(p)
    };
    let kind = match name {
        "h" => GateKind::H,
        "x" => GateKind::X,
        "cx" | "CX" => GateKind::Cnot,
        "ry" => GateKind::Ry(angle()?),
        "rz" => GateKind::Rz(angle()?),
        other => return Err(format!("unsupported gate `{other}`")),
    };
    if param.is_some() && !matches!(kind, GateKind::Ry(_) | GateKind::Rz(_)) {
        return Err(format!("`{name}` takes no parameters"));
    }
    Ok((Gate::new(kind), args.trim()))
}

/// `q[3]` → 3.
fn parse_index(s: &str, reg: &str) -> std::result::Result<usize, String> {
    s.strip_prefix(reg)
        .and_then(|r| r.trim().strip_prefix('['))
        .and_then(|r| r.strip_suffix(']'))
        .and_then(|r| r.trim().parse().ok())
        .ok_or_else(|| format!("expected `{reg}[index]`, found `{s}`"))
}

/// Evaluates `+ - * /`, parentheses, numbers and `pi`.
fn eval_angle(expr: &str) -> std::result::Result<f64, String> {
    let tokens: Vec<char> = expr.chars().filter(|c| !c.is_whitespace()).collect();
    let mut p = ExprParser { t: &tokens, i: 0 };
    let v = p.sum()?;
    if p.i != tokens.len() {
        return Err(format!("trailing input in angle `{expr}`"));
    }
    if !v.is_finite() {
        return Err(format!("angle `{expr}` is not finite"));
    }
    Ok(v)
}

struct ExprParser<'a> {
    t: &'a [char],
    i: usize,
}

impl ExprParser<'_> {
    fn peek(&self) -> Option<char> {
        self.t.get(self.i).copied()
    }

    fn sum(&mut self) -> std::result::Result<f64, String> {
        let mut v = self.product()?;
        while let Some(op @ ('+' | '-')) = self.peek() {
            self.i += 1;
            let r = self.product()?;
            v = if op == '+' { v + r } else { v - r };
        }
        Ok(v)
    }

    fn product(&mut self) -> std::result::Result<f64, String> {
        let mut v = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek() {
            self.i += 1;
            let r = self.unary()?;
            v = if op == '*' { v * r } else { v / r };
        }
        Ok(v)
    }

    fn unary(&mut self) -> std::result::Result<f64, String> {
        match self.peek() {
            Some('-') => {
                self.i += 1;
                Ok(-self.unary()?)
            }
            Some('+') => {
                self.i += 1;
                self.unary()
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> std::result::Result<f64, String> {
        match self.peek() {
            Some('(') => {
                self.i += 1;
                let v = self.sum()?;
                if self.peek() != Some(')') {
                    return Err("unbalanced parenthesis".into());
                }
                self.i += 1;
                Ok(v)
            }
            Some('p') if self.t[self.i..].starts_with(&['p', 'i']) => {
                self.i += 2;
                Ok(std::f64::consts::PI)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let start = self.i;
                while let Some(c) = self.peek() {
                    let exp_sign = (c == '-' || c == '+')
                        && matches!(self.t.get(self.i.wrapping_sub(1)), Some('e' | 'E'));
                    if c.is_ascii_digit() || c == '.' || c == 'e' || c == 'E' || exp_sign {
                        self.i += 1;
                    } else {
                        break;
                    }
                }
                let s: String = self.t[start..self.i].iter().collect();
                s.parse().map_err(|_| format!("bad number `{s}`"))
            }
            other => Err(format!("unexpected {other:?} in angle")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::{build_evolution, build_trotter_step};
    use crate::qcore::max_abs_diff;
    use crate::schwinger::ModelParams;

    #[test]
    fn x_gate_line() {
        let mut c = Circuit::new(4, "");
        c.push(Gate::new(GateKind::X), &[2]).unwrap();
        assert!(export_qasm(&c).unwrap().contains("x q[2];"));
    }

    #[test]
    fn rz_keeps_full_precision() {
        let mut c = Circuit::new(4, "");
        c.push(Gate::new(GateKind::Rz(0.1)), &[1]).unwrap();
        c.push(Gate::new(GateKind::Rz(1.0 / 3.0)), &[1]).unwrap();
        let text = export_qasm(&c).unwrap();
        assert!(text.contains("rz(0.1) q[1];"));
        assert!(text.contains("rz(0.3333333333333333) q[1];"));
        let back = parse_qasm(&text).unwrap();
        assert_eq!(back.ops()[1].gate.params(), Some(1.0 / 3.0));
    }

    #[test]
    fn round_trip_preserves_unitary_and_structure() {
        let p = ModelParams::new(1.0, 0.7).unwrap();
        let step = build_trotter_step(&p.quenched(), 0.1).unwrap();
        let back = parse_qasm(&export_qasm(&step).unwrap()).unwrap();
        assert!(max_abs_diff(&step.unitary(), &back.unitary()) < 1e-12);
        assert_eq!(back.barriers(), step.barriers());
        let evo = build_evolution(&p, 0.1, 2).unwrap();
        let back = parse_qasm(&export_qasm(&evo).unwrap()).unwrap();
        assert_eq!(back.step_marks(), evo.step_marks());
        assert_eq!(back.meta.name, "quench_evolution");
    }

    #[test]
    fn unsupported_gate_is_rejected() {
        let mut c = Circuit::new(1, "");
        c.push(Gate::new(GateKind::Y), &[0]).unwrap();
        assert_eq!(export_qasm(&c), Err(Error::UnsupportedGate("y".into())));
    }

    #[test]
    fn angle_expressions() {
        let pi = std::f64::consts::PI;
        assert_eq!(eval_angle("-pi/4").unwrap(), -pi / 4.0);
        assert_eq!(eval_angle("2*(pi - 1)").unwrap(), 2.0 * (pi - 1.0));
        assert_eq!(eval_angle("1.5e-3").unwrap(), 1.5e-3);
        assert_eq!(eval_angle("-1e+2").unwrap(), -100.0);
        assert!(eval_angle("pi)").is_err());
        assert!(eval_angle("foo").is_err());
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = "OPENQASM 2.0;\nqreg q[2];\ncx q[0],q[0];\n";
        assert!(matches!(
            parse_qasm(text),
            Err(Error::QasmParse { line: 3, .. })
        ));
        let text = "OPENQASM 2.0;\nqreg q[2];\nu3(0,0,0) q[0];\n";
        assert!(matches!(
            parse_qasm(text),
            Err(Error::QasmParse { line: 3, .. })
        ));
        assert!(matches!(
            parse_qasm("h q[0];"),
            Err(Error::QasmParse { line: 1, .. })
        ));
        let text = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[2];\nry(-pi/2) q[1];\n";
        assert_eq!(
            parse_qasm(text).unwrap().ops()[0].gate.params(),
            Some(-std::f64::consts::FRAC_PI_2)
        );
    }
}
