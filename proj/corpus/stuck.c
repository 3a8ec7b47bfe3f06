struct list {unsigned head; struct list *tail;};
struct list *second (struct list *p) {
  //@ With l,
  //@ Require ll(p, l)
  //@ Ensure ll(ret, l)
  struct list *q;
  q = p->tail;
  return p;
}
