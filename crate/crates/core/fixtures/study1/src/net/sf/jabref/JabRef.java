package net.sf.jabref;

public class JabRef {









































    public void start(String[] arg0) {




        helper50.process(entry, 50);









        if (entry.size() > 60) {









        helper70.process(entry, 70);
}
