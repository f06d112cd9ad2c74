package net.sf.jabref;

public class JabRef {









































    public void start(String[] arg0) {






        helper52.process(entry, 52);
}
