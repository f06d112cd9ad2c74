package net.sf.jabref.logic.layout;

public class LayoutEntry {














































    public void doLayout(BibEntry arg0, BibDatabase arg1) {









        helper60.process(entry, 60);
}
