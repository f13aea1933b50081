use super::ast::{Formula, Sign, Term};

/// Prints a term. Unsigned compounds are compact (`[x+y]`); signed compounds
/// put spaces around the operator (`[c1- & c2-]`) so signs stay readable.
pub fn print_term(t: &Term) -> String {
    let mut out = String::new();
    write_term(t, &mut out);
    out
}

fn write_term(t: &Term, out: &mut String) {
    match t {
        Term::Const(name, sign) | Term::Var(name, sign) => {
            out.push_str(name);
            out.push_str(sign.suffix());
        }
        Term::App(l, r) | Term::Sum(l, r) | Term::Pair(l, r) => {
            let op = t.op().map(|o| o.symbol()).unwrap_or_default();
            out.push('[');
            write_term(l, out);
            if l.sign() == Sign::Unsigned {
                out.push_str(op);
            } else {
                out.push(' ');
                out.push_str(op);
                out.push(' ');
            }
            write_term(r, out);
            out.push(']');
        }
        Term::Bang(inner) => {
            out.push('!');
            write_term(inner, out);
        }
    }
}

/// Prints a formula. Binary operands that are themselves binary are always
/// parenthesised, except for the right operand of `->`.
pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(f, &mut out);
    out
}

fn write_operand(f: &Formula, out: &mut String) {
    if f.is_binary() {
        out.push('(');
        write_formula(f, out);
        out.push(')');
    } else {
        write_formula(f, out);
    }
}

fn write_formula(f: &Formula, out: &mut String) {
    match f {
        Formula::Bottom => out.push_str("_|_"),
        Formula::Var(name) => out.push_str(name),
        Formula::Not(inner) => {
            out.push('~');
            write_operand(inner, out);
        }
        Formula::Just(t, body) => {
            write_term(t, out);
            out.push(':');
            write_operand(body, out);
        }
        Formula::And(a, b) | Formula::Or(a, b) => {
            write_operand(a, out);
            out.push_str(if matches!(f, Formula::And(..)) {
                " /\\ "
            } else {
                " \\/ "
            });
            write_operand(b, out);
        }
        Formula::Implies(a, b) => {
            write_operand(a, out);
            out.push_str(" -> ");
            if matches!(**b, Formula::Implies(..)) {
                write_formula(b, out);
            } else {
                write_operand(b, out);
            }
        }
    }
}
