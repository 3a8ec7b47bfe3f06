struct list {unsigned head; struct list *tail;};
void nothing () {
  //@ Require emp
  //@ Ensure emp
}
struct list *id (struct list *p) {
  //@ With l,
  //@ Require ll(p, l)
  //@ Ensure ll(ret, l)
  return p;
}
